#include "scimetrics/simetrics.hpp"

#include "scimetrics/errors.hpp"
#include "scimetrics/util.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <sstream>

namespace scimetrics {

EdgePolicy parse_edge_policy(std::string_view s) {
    if (s == "drop") return EdgePolicy::Drop;
    if (s == "shorten") return EdgePolicy::Shorten;
    throw ConfigError(fmt::format("edge policy must be 'drop' or 'shorten', got '{}'", s));
}

std::string_view edge_policy_name(EdgePolicy p) noexcept { return p == EdgePolicy::Drop ? "drop" : "shorten"; }

Score quality(Score fs, Score bs) { return fs && bs ? Score(*fs - *bs) : std::nullopt; }
Score novelty(Score ps, Score bs) { return ps && bs ? Score(*ps - *bs) : std::nullopt; }
Score impact(Score fs, Score ps) { return fs && ps ? Score(*fs - *ps) : std::nullopt; }

SimilarityScorer::SimilarityScorer(const Corpus& corpus, const EmbeddingMatrix& emb, WindowSpec windows,
                                   EdgePolicy policy)
    : corpus_(&corpus), emb_(&emb), sums_(corpus, emb), windows_(windows), policy_(policy) {
    if (windows.backward_from > windows.backward_to || windows.forward_from > windows.forward_to)
        throw ConfigError("window offsets must satisfy a <= b");
    if (!corpus.empty()) {
        first_year_ = corpus.min_year();
        last_year_ = corpus.max_year();
    }
}

std::size_t SimilarityScorer::position(std::string_view paper_id) const {
    auto idx = corpus_->index_of(paper_id);
    if (!idx) throw DataError(fmt::format("unknown paper '{}'", paper_id));
    return *idx;
}

Score SimilarityScorer::similarity(std::size_t i, int a, int b) const {
    const Paper& p = corpus_->paper(i);
    auto v = emb_->find(p.id);
    if (!v) throw DataError(fmt::format("paper '{}' has no embedding", p.id));
    if (policy_ == EdgePolicy::Drop && (p.year + a < first_year_ || p.year + b > last_year_)) return std::nullopt;
    auto mean = sums_.window_mean(i, a, b);
    if (!mean) return std::nullopt;
    return cosine_similarity(*v, std::span<const double>(*mean));
}

Score SimilarityScorer::backward_similarity(std::size_t i) const {
    return similarity(i, windows_.backward_from, windows_.backward_to);
}

Score SimilarityScorer::forward_similarity(std::size_t i) const {
    return similarity(i, windows_.forward_from, windows_.forward_to);
}

Score SimilarityScorer::contemporaneous_similarity(std::size_t i) const { return similarity(i, 0, 0); }

ScoreRow SimilarityScorer::score(std::size_t i) const {
    ScoreRow r;
    r.paper_id = corpus_->paper(i).id;
    r.year = corpus_->paper(i).year;
    r.bs = backward_similarity(i);
    r.fs = forward_similarity(i);
    r.ps = contemporaneous_similarity(i);
    r.q = quality(r.fs, r.bs);
    r.n = novelty(r.ps, r.bs);
    r.i = impact(r.fs, r.ps);
    return r;
}

PaperScores compute_scores(const Corpus& corpus, const EmbeddingMatrix& emb, WindowSpec windows, EdgePolicy policy) {
    const SimilarityScorer scorer(corpus, emb, windows, policy);
    PaperScores out(corpus.size());
    parallel_for(corpus.size(), worker_threads(), [&](std::size_t i) { out[i] = scorer.score(i); });
    return out;
}

namespace {

struct Moments {
    double mean = 0.0, sd = 0.0;
    std::size_t n = 0;
};

template <class Range, class Get>
Moments moments(const Range& values, Get get) {
    Moments m;
    double sum = 0.0;
    for (const auto& v : values)
        if (auto x = get(v)) {
            sum += *x;
            ++m.n;
        }
    if (m.n < 2) throw DataError("standardization needs at least two values");
    m.mean = sum / static_cast<double>(m.n);
    double ss = 0.0;
    for (const auto& v : values)
        if (auto x = get(v)) ss += (*x - m.mean) * (*x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(m.n - 1));
    if (!(m.sd > 0.0)) throw DataError("standardization of a zero-variance variable");
    return m;
}

}  // namespace

std::vector<Score> standardize(std::span<const Score> values) {
    const Moments m = moments(values, [](const Score& s) { return s; });
    std::vector<Score> out(values.size());
    for (std::size_t k = 0; k < values.size(); ++k)
        if (values[k]) out[k] = (*values[k] - m.mean) / m.sd;
    return out;
}

std::vector<double> standardize(std::span<const double> values) {
    const Moments m = moments(values, [](double x) { return Score(x); });
    std::vector<double> out(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) out[k] = (values[k] - m.mean) / m.sd;
    return out;
}

QualityDecomposition decompose_in_quality_sd(const PaperScores& scores) {
    auto complete = [](const ScoreRow& r) { return r.q && r.n && r.i; };
    const Moments m = moments(scores, [&](const ScoreRow& r) { return complete(r) ? r.q : std::nullopt; });
    QualityDecomposition d;
    d.quality_sd = m.sd;
    d.novelty_scaled.resize(scores.size());
    d.impact_scaled.resize(scores.size());
    d.quality_scaled.resize(scores.size());
    for (std::size_t k = 0; k < scores.size(); ++k) {
        if (!complete(scores[k])) continue;
        d.novelty_scaled[k] = *scores[k].n / m.sd;
        d.impact_scaled[k] = *scores[k].i / m.sd;
        d.quality_scaled[k] = *scores[k].q / m.sd;
    }
    return d;
}

namespace {

std::string field(const Score& s) { return s ? format_double(*s) : std::string{}; }

Score parse_score(std::string_view s, const std::string& where) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw DataError(fmt::format("{}: bad number '{}'", where, s));
    return v;
}

}  // namespace

void save_scores(const PaperScores& scores, const std::filesystem::path& path) {
    std::string out = "paper_id\tyear\tBS\tFS\tPS\tQ\tN\tI\n";
    for (const auto& r : scores)
        out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", r.paper_id, r.year, field(r.bs), field(r.fs),
                           field(r.ps), field(r.q), field(r.n), field(r.i));
    write_file(path, out);
}

PaperScores load_scores(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw MissingArtifact(path.string());
    std::istringstream in(read_file(path));
    PaperScores out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line.rfind("paper_id", 0) == 0) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line, '\t');
        const std::string where = fmt::format("{} line {}", path.string(), lineno);
        if (f.size() != 8) throw DataError(where + ": expected 8 fields");
        ScoreRow r;
        r.paper_id = f[0];
        r.year = std::stoi(f[1]);
        r.bs = parse_score(f[2], where);
        r.fs = parse_score(f[3], where);
        r.ps = parse_score(f[4], where);
        r.q = parse_score(f[5], where);
        r.n = parse_score(f[6], where);
        r.i = parse_score(f[7], where);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace scimetrics
