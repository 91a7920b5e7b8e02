#include "scimetrics/embed_store.hpp"

#include "scimetrics/errors.hpp"
#include "scimetrics/util.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>

namespace scimetrics {

static_assert(std::endian::native == std::endian::little, "embedding I/O assumes a little-endian host");

namespace {

template <class T>
void check_vector(std::string_view id, std::span<const T> v, std::uint32_t dim) {
    if (v.size() != dim)
        throw DataError(fmt::format("embedding for '{}' has length {}, expected {}", id, v.size(), dim));
    double norm2 = 0.0;
    for (T x : v) {
        if (!std::isfinite(static_cast<double>(x))) throw DataError(fmt::format("embedding for '{}' is not finite", id));
        norm2 += static_cast<double>(x) * static_cast<double>(x);
    }
    if (!(norm2 > 0.0)) throw DataError(fmt::format("embedding for '{}' is the zero vector", id));
}

template <class A, class B>
double cosine_impl(std::span<const A> v, std::span<const B> w) {
    if (v.size() != w.size()) throw DataError(fmt::format("dimension mismatch: {} vs {}", v.size(), w.size()));
    double dot = 0.0, vv = 0.0, ww = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double a = v[k], b = w[k];
        dot += a * b;
        vv += a * a;
        ww += b * b;
    }
    if (!(vv > 0.0) || !(ww > 0.0)) throw DataError("cosine similarity of a zero-norm vector");
    const double s = dot / (std::sqrt(vv) * std::sqrt(ww));
    return std::clamp(s, -1.0, 1.0);
}

thread_local std::size_t g_load_warnings = 0;

}  // namespace

void EmbeddingMatrix::set(std::string id, std::span<const float> v) {
    check_vector(id, v, dim_);
    auto it = row_.find(id);
    if (it != row_.end()) {
        std::copy(v.begin(), v.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
        return;
    }
    row_.emplace(id, ids_.size());
    ids_.push_back(std::move(id));
    data_.insert(data_.end(), v.begin(), v.end());
}

void EmbeddingMatrix::set(std::string id, std::span<const double> v) {
    std::vector<float> f(v.begin(), v.end());
    set(std::move(id), std::span<const float>(f));
}

std::span<const float> EmbeddingMatrix::at(std::string_view id) const {
    if (auto v = find(id)) return *v;
    throw DataError(fmt::format("no embedding for paper '{}'", id));
}

std::optional<std::span<const float>> EmbeddingMatrix::find(std::string_view id) const {
    auto it = row_.find(id);
    if (it == row_.end()) return std::nullopt;
    return row(it->second);
}

bool EmbeddingMatrix::operator==(const EmbeddingMatrix& o) const {
    if (dim_ != o.dim_ || ids_ != o.ids_) return false;
    // bitwise: -0.0f and 0.0f differ, NaN never occurs
    return data_.size() == o.data_.size() &&
           std::memcmp(data_.data(), o.data_.data(), data_.size() * sizeof(float)) == 0;
}

double cosine_similarity(std::span<const double> v, std::span<const double> w) { return cosine_impl(v, w); }
double cosine_similarity(std::span<const float> v, std::span<const double> w) { return cosine_impl(v, w); }
double cosine_similarity(std::span<const float> v, std::span<const float> w) { return cosine_impl(v, w); }

std::optional<std::vector<double>> window_mean(const Corpus& corpus, const EmbeddingMatrix& emb,
                                               std::string_view paper_id, int a, int b) {
    if (a > b) throw DataError(fmt::format("window ({}, {}) has a > b", a, b));
    const auto idx = corpus.index_of(paper_id);
    if (!idx) throw DataError(fmt::format("unknown paper '{}'", paper_id));
    const int t = corpus.paper(*idx).year;
    std::vector<double> sum(emb.dim(), 0.0);
    std::size_t n = 0;
    for (int y = t + a; y <= t + b; ++y) {
        for (std::size_t j : corpus.papers_in_year(y)) {
            if (j == *idx) continue;
            auto v = emb.find(corpus.paper(j).id);
            if (!v) continue;
            for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += (*v)[k];
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    for (double& x : sum) x /= static_cast<double>(n);
    return sum;
}

YearSums::YearSums(const Corpus& corpus, const EmbeddingMatrix& emb)
    : corpus_(&corpus), emb_(&emb), dim_(emb.dim()) {
    for (const auto& [year, papers] : corpus.year_index()) {
        auto& s = sum_[year];
        s.assign(dim_, 0.0);
        std::size_t n = 0;
        for (std::size_t j : papers) {
            auto v = emb.find(corpus.paper(j).id);
            if (!v) continue;
            for (std::size_t k = 0; k < dim_; ++k) s[k] += (*v)[k];
            ++n;
        }
        count_[year] = n;
    }
}

std::optional<std::vector<double>> YearSums::window_mean(std::size_t i, int a, int b) const {
    if (a > b) throw DataError(fmt::format("window ({}, {}) has a > b", a, b));
    const Paper& p = corpus_->paper(i);
    const int t = p.year;
    std::vector<double> sum(dim_, 0.0);
    std::size_t n = 0;
    for (auto it = sum_.lower_bound(t + a); it != sum_.end() && it->first <= t + b; ++it) {
        for (std::size_t k = 0; k < dim_; ++k) sum[k] += it->second[k];
        n += count_.at(it->first);
    }
    if (a <= 0 && b >= 0) {
        if (auto self = emb_->find(p.id)) {
            for (std::size_t k = 0; k < dim_; ++k) sum[k] -= (*self)[k];
            --n;
        }
    }
    if (n == 0) return std::nullopt;
    for (double& x : sum) x /= static_cast<double>(n);
    return sum;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c >= 0x80) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::vector<double> synthetic_embed(std::string_view text, std::uint32_t dim, std::uint64_t seed) {
    if (dim < 2) throw DataError("synthetic embedding needs dim >= 2");
    const auto tokens = tokenize(text);
    if (tokens.empty()) throw DataError("cannot embed empty text");
    std::vector<double> v(dim, 0.0);
    for (const auto& tok : tokens) {
        Rng rng(fnv1a64(tok, seed));
        for (double& x : v) x += rng.normal();
    }
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    const double norm = std::sqrt(norm2);
    for (double& x : v) x /= norm;
    return v;
}

EmbeddingMatrix embed_corpus_synthetic(const Corpus& corpus, std::uint32_t dim, std::uint64_t seed) {
    EmbeddingMatrix emb(dim);
    for (const Paper& p : corpus.papers()) {
        const auto v = synthetic_embed(p.text(), dim, seed);
        emb.set(p.id, std::span<const double>(v));
    }
    return emb;
}

namespace {

void put_u32(std::string& out, std::uint32_t x) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((x >> (8 * k)) & 0xFF));
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void save_embeddings(const EmbeddingMatrix& emb, const std::filesystem::path& path) {
    std::string out = "EMB1";
    put_u32(out, emb.dim());
    for (std::size_t r = 0; r < emb.size(); ++r) {
        const std::string& id = emb.ids()[r];
        if (id.size() > 0xFFFF) throw DataError(fmt::format("paper id '{}' too long for embedding file", id));
        out.push_back(static_cast<char>(id.size() & 0xFF));
        out.push_back(static_cast<char>((id.size() >> 8) & 0xFF));
        out += id;
        for (float f : emb.row(r)) put_u32(out, std::bit_cast<std::uint32_t>(f));
    }
    write_file(path, out);
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, const EmbeddingLoadOptions& options) {
    g_load_warnings = 0;
    if (!std::filesystem::exists(path)) throw MissingArtifact(path.string());
    const std::string bytes = read_file(path);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t size = bytes.size();
    if (size < 8 || std::memcmp(p, "EMB1", 4) != 0)
        throw DataError(fmt::format("{}: missing EMB1 header", path.string()));
    const std::uint32_t dim = get_u32(p + 4);
    if (dim == 0) throw DataError(fmt::format("{}: header declares dimension 0", path.string()));
    if (options.expected_dim && *options.expected_dim != dim)
        throw DataError(fmt::format("{}: header dimension {} does not match expected {}", path.string(), dim,
                                    *options.expected_dim));
    EmbeddingMatrix emb(dim);
    std::size_t pos = 8;
    std::size_t record = 0;
    std::vector<float> v(dim);
    while (pos < size) {
        if (size - pos < 2) throw DataError(fmt::format("{}: record {} truncated in id length", path.string(), record));
        const std::size_t len = static_cast<std::size_t>(p[pos]) | (static_cast<std::size_t>(p[pos + 1]) << 8);
        pos += 2;
        if (size - pos < len) throw DataError(fmt::format("{}: record {} truncated in id", path.string(), record));
        std::string id(bytes.data() + pos, len);
        pos += len;
        if (size - pos < 4ull * dim)
            throw DataError(fmt::format("{}: record {} ('{}') truncated: {} of {} floats present", path.string(),
                                        record, id, (size - pos) / 4, dim));
        for (std::uint32_t k = 0; k < dim; ++k) v[k] = std::bit_cast<float>(get_u32(p + pos + 4ull * k));
        pos += 4ull * dim;
        if (options.corpus && !options.corpus->index_of(id)) {
            log_warning(fmt::format("{}: record {} id '{}' is not in the corpus, skipped", path.string(), record, id));
            ++g_load_warnings;
        } else {
            try {
                emb.set(std::move(id), std::span<const float>(v));
            } catch (const DataError& e) {
                throw DataError(fmt::format("{}: record {}: {}", path.string(), record, e.what()));
            }
        }
        ++record;
    }
    return emb;
}

std::size_t last_embedding_load_warnings() noexcept { return g_load_warnings; }

}  // namespace scimetrics
