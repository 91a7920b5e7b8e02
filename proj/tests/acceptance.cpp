// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Every check compares the library against a reference computed here.
#include "support.hpp"

#include "scimetrics/config.hpp"
#include "scimetrics/econometrics.hpp"
#include "scimetrics/errors.hpp"
#include "scimetrics/labeling.hpp"
#include "scimetrics/mapviz.hpp"
#include "scimetrics/pipeline.hpp"
#include "scimetrics/probe.hpp"
#include "scimetrics/simetrics.hpp"
#include "scimetrics/svg.hpp"

#include <Eigen/SVD>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

using namespace scimetrics;
using namespace testing;

namespace {

const std::filesystem::path kData = SCIMETRICS_DATA_DIR;

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;  // keep the first failure
        ok = false;
    }
    void expect(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

bool run_criterion(const std::string& name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && secs >= limit_s) o.fail(fmt::format("runtime {:.2f} s exceeds {} s", secs, limit_s));
    fmt::print("{} {:<22} {:>7.2f} s (limit {} s){}{}\n", o.ok ? "PASS" : "FAIL", name, secs, limit_s,
               o.detail.empty() ? "" : "  ", o.detail);
    std::fflush(stdout);
    return o.ok;
}

double sample_sd(const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// ---------------------------------------------------------------- identities

Outcome identity_suite() {
    Outcome o;
    Rng rng(101);
    constexpr std::size_t n = 10000;
    PaperScores rows(n);
    double worst = 0;
    for (std::size_t k = 0; k < n; ++k) {
        ScoreRow& r = rows[k];
        r.paper_id = "p" + std::to_string(k);
        r.year = 1994 + static_cast<int>(rng.below(30));
        r.bs = 2 * rng.uniform() - 1;
        r.fs = 2 * rng.uniform() - 1;
        r.ps = 2 * rng.uniform() - 1;
        r.q = quality(r.fs, r.bs);
        r.n = novelty(r.ps, r.bs);
        r.i = impact(r.fs, r.ps);
        worst = std::max(worst, std::abs(*r.q - (*r.n + *r.i)));
    }
    o.expect(worst <= 1e-12, fmt::format("max |Q - (N + I)| = {:.3g}", worst));

    // yearly means of the scaled components add up
    const QualityDecomposition d = decompose_in_quality_sd(rows);
    std::vector<double> q;
    for (const auto& r : rows) q.push_back(*r.q);
    o.expect(std::abs(d.quality_sd - sample_sd(q)) <= 1e-12, "quality SD differs from the sample SD of Q");
    std::map<int, std::array<double, 4>> by_year;  // sum Q, sum N, sum I, count
    for (std::size_t k = 0; k < n; ++k) {
        auto& a = by_year[rows[k].year];
        a[0] += *d.quality_scaled[k];
        a[1] += *d.novelty_scaled[k];
        a[2] += *d.impact_scaled[k];
        a[3] += 1;
    }
    double worst_year = 0;
    for (const auto& [year, a] : by_year)
        worst_year = std::max(worst_year, std::abs(a[0] / a[3] - (a[1] / a[3] + a[2] / a[3])));
    o.expect(worst_year <= 1e-12, fmt::format("yearly decomposition residual {:.3g}", worst_year));
    const double sd_q = sample_sd(q);
    double worst_scale = 0;
    for (std::size_t k = 0; k < n; ++k)
        worst_scale = std::max(worst_scale, std::abs(*d.quality_scaled[k] - *rows[k].q / sd_q));
    o.expect(worst_scale <= 1e-12, "scaled quality is not Q / sd(Q)");

    // year-mean citation normalization
    std::vector<Paper> papers;
    for (std::size_t k = 0; k < n; ++k)
        papers.push_back(make_paper("c" + std::to_string(k), "JHE", 1994 + static_cast<int>(rng.below(30)), {},
                                    static_cast<std::int64_t>(rng.below(500))));
    const Corpus corpus(papers, three_journal_registry(), {1994, 2023});
    const std::vector<double> norm = normalize_citations(corpus);
    std::map<int, std::pair<double, double>> cites;
    for (std::size_t k = 0; k < n; ++k) {
        cites[corpus.paper(k).year].first += norm[k];
        cites[corpus.paper(k).year].second += 1;
    }
    double worst_mean = 0;
    for (const auto& [year, s] : cites) worst_mean = std::max(worst_mean, std::abs(s.first / s.second - 1.0));
    o.expect(worst_mean <= 1e-12, fmt::format("yearly mean of normalized citations off by {:.3g}", worst_mean));
    if (o.ok) o.detail = fmt::format("max residuals {:.1e} / {:.1e} / {:.1e}", worst, worst_year, worst_mean);
    return o;
}

// ---------------------------------------------------------------- similarity

Score brute_similarity(const RandomCorpus& rc, std::size_t i, int a, int b, EdgePolicy policy) {
    const int y = rc.corpus.paper(i).year;
    if (policy == EdgePolicy::Drop && (y + a < rc.corpus.min_year() || y + b > rc.corpus.max_year()))
        return std::nullopt;
    const auto mean = brute_window_mean(rc.corpus, rc.emb, i, a, b);
    if (!mean) return std::nullopt;
    return brute_cosine(rc.emb.at(rc.corpus.paper(i).id), *mean);
}

Outcome similarity_oracle() {
    Outcome o;
    Rng rng(202);
    double worst = 0;
    std::size_t compared = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 20 + rng.below(181);
        const auto dim = static_cast<std::uint32_t>(2 + rng.below(15));
        const int years = 1 + static_cast<int>(rng.below(10));
        const RandomCorpus rc = random_corpus(rng, n, dim, years);
        for (EdgePolicy policy : {EdgePolicy::Drop, EdgePolicy::Shorten}) {
            const PaperScores s = compute_scores(rc.corpus, rc.emb, {}, policy);
            for (std::size_t i = 0; i < n; ++i) {
                const Score want[] = {brute_similarity(rc, i, -5, -1, policy), brute_similarity(rc, i, 1, 5, policy),
                                      brute_similarity(rc, i, 0, 0, policy)};
                const Score got[] = {s[i].bs, s[i].fs, s[i].ps};
                for (int k = 0; k < 3; ++k) {
                    if (want[k].has_value() != got[k].has_value()) {
                        o.fail(fmt::format("trial {} paper {}: presence mismatch", trial, i));
                        continue;
                    }
                    if (want[k]) {
                        worst = std::max(worst, std::abs(*want[k] - *got[k]));
                        ++compared;
                    }
                }
            }

            // mirror the calendar: backward and forward trade places
            std::vector<Paper> mirrored = rc.corpus.papers();
            const int pivot = rc.corpus.min_year() + rc.corpus.max_year();
            for (Paper& p : mirrored) p.year = pivot - p.year;
            const Corpus rev(mirrored, rc.corpus.registry(), rc.corpus.range());
            const PaperScores r = compute_scores(rev, rc.emb, {}, policy);
            for (std::size_t i = 0; i < n; ++i) {
                const bool swapped = r[i].bs.has_value() == s[i].fs.has_value() &&
                                     r[i].fs.has_value() == s[i].bs.has_value() &&
                                     (!r[i].bs || std::abs(*r[i].bs - *s[i].fs) <= 1e-12) &&
                                     (!r[i].fs || std::abs(*r[i].fs - *s[i].bs) <= 1e-12);
                const bool negated = r[i].q.has_value() == s[i].q.has_value() &&
                                     (!r[i].q || std::abs(*r[i].q + *s[i].q) <= 1e-12);
                if (!swapped || !negated) o.fail(fmt::format("trial {} paper {}: time reversal broken", trial, i));
            }
        }
    }
    o.expect(worst <= 1e-10, fmt::format("max deviation from enumeration {:.3g}", worst));
    if (o.ok) o.detail = fmt::format("{} similarities, max deviation {:.1e}", compared, worst);
    return o;
}

// ---------------------------------------------------------------- classifier

Outcome classifier_suite() {
    Outcome o;
    Rng rng(303);
    constexpr double step = 0.001;
    for (int set = 0; set < 1000 && o.ok; ++set) {
        const std::size_t n = 2 + rng.below(300);
        std::vector<int> y(n);
        std::vector<double> p(n);
        for (std::size_t k = 0; k < n; ++k) {
            y[k] = rng.uniform() < 0.4 ? 1 : 0;
            // probabilities on the cutoff grid, informative about the label
            const double raw = std::clamp(0.5 + (y[k] ? 0.15 : -0.15) + 0.25 * rng.normal(), 0.0, 1.0);
            p[k] = std::round(raw * 1000.0) / 1000.0;
        }
        y[0] = 1;
        y[1] = 0;

        const double cutoff = static_cast<double>(rng.below(1001)) / 1000.0;
        std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const bool pos = p[k] > cutoff;
            if (pos && y[k]) ++tp;
            else if (pos) ++fp;
            else if (y[k]) ++fn;
            else ++tn;
        }
        const ConfusionCounts c = confusion(y, p, cutoff);
        if (c.tp != tp || c.fp != fp || c.tn != tn || c.fn != fn) o.fail(fmt::format("set {}: confusion counts", set));
        const Metrics m = metrics(c);
        const double sens = static_cast<double>(tp) / static_cast<double>(tp + fn);
        const double spec = static_cast<double>(tn) / static_cast<double>(tn + fp);
        const double f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
        if (!m.sensitivity || !m.specificity || !m.f1 || *m.sensitivity != sens || *m.specificity != spec ||
            *m.f1 != f1)
            o.fail(fmt::format("set {}: metrics differ from hand count", set));

        // exhaustive scan: F1 only changes at observed probabilities, so the
        // candidates are 0 and every observed value, smallest winning ties
        std::set<double> candidates(p.begin(), p.end());
        candidates.insert(0.0);
        double best_c = 0, best_f1 = -1;
        for (double cand : candidates) {
            std::size_t a = 0, b = 0, e = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const bool pos = p[k] > cand;
                a += pos && y[k];
                b += pos && !y[k];
                e += !pos && y[k];
            }
            const double v = 2.0 * static_cast<double>(a) / static_cast<double>(2 * a + b + e);
            if (v > best_f1) best_f1 = v, best_c = cand;
        }
        const CutoffChoice got = threshold_search(y, p, step);
        if (got.cutoff != best_c || got.value != best_f1)
            o.fail(fmt::format("set {}: grid picks {} (F1 {}), scan picks {} (F1 {})", set, got.cutoff, got.value,
                               best_c, best_f1));
    }

    for (int k = 0; k < 1000; ++k) {
        const double a = rng.uniform(), b = rng.uniform();
        if (fuse(a, b) != fuse(b, a)) o.fail("fuse is not symmetric");
        if (fuse(a, a) != a) o.fail("fuse is not idempotent");
    }

    // separable probe problem with a margin
    constexpr std::size_t dim = 8;
    std::vector<double> w(dim);
    for (auto& x : w) x = rng.normal();
    EmbeddingMatrix emb(dim);
    LabeledSet train, val;
    std::size_t made = 0;
    while (made < 400) {
        std::vector<double> v(dim);
        double s = 0;
        for (std::size_t k = 0; k < dim; ++k) s += w[k] * (v[k] = rng.normal());
        if (std::abs(s) < 0.5) continue;
        const std::string id = "s" + std::to_string(made);
        emb.set(id, std::span<const double>(v));
        (made < 320 ? train : val).entries.push_back({id, s > 0 ? 1 : 0});
        ++made;
    }
    ProbeHyper hyper;
    hyper.epochs = 500;
    const ProbeModel model = train_probe(train, val, emb, hyper);
    o.expect(model.epochs_run <= 500, "probe ran more than 500 epochs");
    o.expect(model.validation_accuracy == 1.0,
             fmt::format("probe validation accuracy {:.4f}", model.validation_accuracy));
    if (o.ok) o.detail = fmt::format("1000 sets; probe accuracy 1.0 after {} epochs", model.epochs_run);
    return o;
}

// ---------------------------------------------------------------- classifier table

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

Outcome table1_structure() {
    Outcome o;
    TempDir dir("acceptance_table1");
    RunConfig c;
    c.corpus = kData / "synth2000" / "corpus.jsonl";
    c.registry = kData / "synth2000" / "registry.jsonl";
    c.out = dir.path;
    for (const char* step : {"embed", "label", "train", "fuse"}) run_step(step, c);
    const std::string table = read_file(dir.path / "table1.txt");
    const auto lines = lines_of(table);
    std::size_t head = 0;
    while (head < lines.size() && lines[head].find("Sample (N=") == std::string::npos) ++head;
    o.expect(head + 3 < lines.size(), "no sample header in the table");
    if (!o.ok) return o;

    std::size_t at = 0;
    for (const char* sample : {"Journal Sample (N=", "Author Sample (N=", "Combined Sample (N="}) {
        const auto pos = lines[head].find(sample, at);
        o.expect(pos != std::string::npos, fmt::format("header lacks '{}' in order", sample));
        at = pos == std::string::npos ? at : pos;
    }
    std::istringstream cols(lines[head + 1]);
    std::vector<std::string> names;
    for (std::string w; cols >> w;) names.push_back(w);
    const std::vector<std::string> expected_cols = {"Criterion",   "Sensitivity", "Specificity", "F1",
                                                    "Sensitivity", "Specificity", "F1",          "Sensitivity",
                                                    "Specificity", "F1"};
    o.expect(names == expected_cols, "column layout differs");

    // rows: p_J at 0.5 and tuned, p_A at 0.5 and tuned, p_C tuned
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    for (std::size_t k = head + 3; k < lines.size(); ++k) {
        std::istringstream in(lines[k]);
        std::string label;
        in >> label;
        if (label.rfind("p_", 0) != 0 || label.find('>') == std::string::npos) continue;
        std::vector<double> v;
        for (std::string cell; in >> cell;) v.push_back(cell == "." ? std::nan("") : std::stod(cell));
        rows.emplace_back(label, v);
    }
    const std::vector<std::string> prefixes = {"p_J>0.500", "p_J>", "p_A>0.500", "p_A>", "p_C>"};
    o.expect(rows.size() == prefixes.size(), fmt::format("{} criterion rows, expected 5", rows.size()));
    if (!o.ok) return o;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        o.expect(rows[k].first.rfind(prefixes[k], 0) == 0, "row order differs at " + rows[k].first);
        o.expect(rows[k].second.size() == 9, "row " + rows[k].first + " lacks nine cells");
    }
    if (!o.ok) return o;
    // global F1 = combined-sample F1 at each classifier's selected cutoff
    const double f1_j = rows[1].second[8], f1_a = rows[3].second[8], f1_c = rows[4].second[8];
    o.expect(f1_c >= f1_j - 0.01, fmt::format("combined F1 {:.3f} < journal F1 {:.3f} - 0.01", f1_c, f1_j));
    o.expect(f1_c >= f1_a - 0.01, fmt::format("combined F1 {:.3f} < author F1 {:.3f} - 0.01", f1_c, f1_a));
    if (o.ok) o.detail = fmt::format("global F1 journal {:.3f}, author {:.3f}, combined {:.3f}", f1_j, f1_a, f1_c);
    return o;
}

// ---------------------------------------------------------------- econometrics

Outcome econometrics_oracle() {
    Outcome o;
    Rng rng(505);
    double worst_ols = 0, worst_fe = 0, worst_std = 0;
    for (int design = 0; design < 100; ++design) {
        const std::size_t n = 30 + rng.below(200), k = 1 + rng.below(5);
        std::vector<Regressor> x(k);
        std::vector<double> y(n);
        std::vector<std::vector<double>> rows(n, std::vector<double>(k + 1, 1.0));
        for (std::size_t j = 0; j < k; ++j) {
            x[j].name = "x" + std::to_string(j);
            for (std::size_t r = 0; r < n; ++r) x[j].values.push_back(rows[r][j + 1] = 3 * rng.normal() + j);
        }
        for (std::size_t r = 0; r < n; ++r) {
            y[r] = 1.5 + rng.normal();
            for (std::size_t j = 0; j < k; ++j) y[r] += (0.3 * static_cast<double>(j) - 0.5) * x[j].values[r];
        }
        const RegressionResult fit = ols(y, x);
        const std::vector<double> ref = normal_equations(rows, y);
        for (std::size_t j = 0; j <= k; ++j) worst_ols = std::max(worst_ols, std::abs(fit.coef[j] - ref[j]));

        // within transform versus explicit dummies
        const std::size_t g = 2 + rng.below(6);
        std::vector<std::size_t> groups(n);
        for (std::size_t r = 0; r < n; ++r) groups[r] = r < g ? r : rng.below(g);
        for (std::size_t r = 0; r < n; ++r) y[r] += static_cast<double>(groups[r]) * 2.0;
        const RegressionResult fe = ols(y, x, groups);
        std::vector<Regressor> dummies = x;
        for (std::size_t h = 1; h < g; ++h) {
            Regressor d{"g" + std::to_string(h), {}};
            for (std::size_t r = 0; r < n; ++r) d.values.push_back(groups[r] == h ? 1.0 : 0.0);
            dummies.push_back(std::move(d));
        }
        const RegressionResult lsdv = ols(y, dummies);
        for (std::size_t j = 0; j < k; ++j) {
            worst_fe = std::max(worst_fe, std::abs(fe.coefficient(x[j].name) - lsdv.coefficient(x[j].name)));
            worst_fe = std::max(worst_fe, std::abs(fe.std_error(x[j].name) - lsdv.std_error(x[j].name)));
        }

        // univariate slope on a standardized regressor
        const std::vector<double> z = standardize(std::span<const double>(x[0].values));
        const RegressionResult uni = ols(y, std::vector<Regressor>{{"z", z}});
        const double mx = std::accumulate(x[0].values.begin(), x[0].values.end(), 0.0) / static_cast<double>(n);
        const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
        double sxy = 0, sxx = 0, syy = 0;
        for (std::size_t r = 0; r < n; ++r) {
            sxy += (x[0].values[r] - mx) * (y[r] - my);
            sxx += (x[0].values[r] - mx) * (x[0].values[r] - mx);
            syy += (y[r] - my) * (y[r] - my);
        }
        const double pearson = sxy / std::sqrt(sxx * syy);
        worst_std = std::max(worst_std, std::abs(uni.coefficient("z") - pearson * sample_sd(y)));

        const std::size_t m = 20 + rng.below(2000);
        std::vector<double> bx(m), by(m);
        for (std::size_t r = 0; r < m; ++r) bx[r] = std::floor(rng.normal() * 3), by[r] = rng.normal();
        const auto bins = binned_scatter(bx, by, 20);
        std::size_t lo = m, hi = 0, total = 0;
        for (const Bin& b : bins) lo = std::min(lo, b.count), hi = std::max(hi, b.count), total += b.count;
        o.expect(bins.size() == 20 && total == m && hi - lo <= 1,
                 fmt::format("design {}: bin sizes {}..{} over {} bins", design, lo, hi, bins.size()));
    }
    o.expect(worst_ols <= 1e-8, fmt::format("OLS off normal equations by {:.3g}", worst_ols));
    o.expect(worst_fe <= 1e-10, fmt::format("within transform off dummies by {:.3g}", worst_fe));
    o.expect(worst_std <= 1e-10, fmt::format("standardized slope off r*sd(y) by {:.3g}", worst_std));
    if (o.ok) o.detail = fmt::format("max deviations {:.1e} / {:.1e} / {:.1e}", worst_ols, worst_fe, worst_std);
    return o;
}

// ---------------------------------------------------------------- map

double reconstruction_error(const Eigen::MatrixXd& centred, const Eigen::MatrixXd& basis /* k x d */) {
    const Eigen::MatrixXd proj = centred * basis.transpose() * basis;
    return (centred - proj).squaredNorm();
}

Outcome map_suite() {
    Outcome o;
    Rng rng(606);
    Eigen::MatrixXd data(10, 4);
    for (Eigen::Index r = 0; r < 10; ++r)
        for (Eigen::Index c = 0; c < 4; ++c) data(r, c) = rng.normal() * static_cast<double>(c + 1);
    const Eigen::MatrixXd centred = data.rowwise() - data.colwise().mean();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
    for (int k = 1; k <= 3; ++k) {
        const PcaResult p = pca(data, k);
        const double ortho = (p.components * p.components.transpose() - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
        o.expect(ortho <= 1e-8, fmt::format("k={}: components not orthonormal ({:.3g})", k, ortho));
        const double err = reconstruction_error(centred, p.components);
        double optimal = 0;
        for (Eigen::Index s = k; s < svd.singularValues().size(); ++s)
            optimal += svd.singularValues()(s) * svd.singularValues()(s);
        o.expect(std::abs(err - optimal) <= 1e-8, fmt::format("k={}: error {} vs optimal {}", k, err, optimal));
        // no random k-dimensional subspace does better
        for (int trial = 0; trial < 2000; ++trial) {
            Eigen::MatrixXd b(k, 4);
            for (Eigen::Index r = 0; r < k; ++r)
                for (Eigen::Index c = 0; c < 4; ++c) b(r, c) = rng.normal();
            const Eigen::HouseholderQR<Eigen::MatrixXd> qr(b.transpose());
            const Eigen::MatrixXd q = (qr.householderQ() * Eigen::MatrixXd::Identity(4, k)).transpose();
            if (reconstruction_error(centred, q) < err - 1e-9) {
                o.fail(fmt::format("k={}: a random subspace beats PCA", k));
                break;
            }
        }
        const Eigen::MatrixXd scores = centred * p.components.transpose();
        o.expect((scores - p.scores).cwiseAbs().maxCoeff() <= 1e-8, "scores are not the projections");
    }

    // two planted blobs
    Eigen::MatrixXd blobs(40, 5);
    std::vector<int> truth(40);
    for (Eigen::Index r = 0; r < 40; ++r) {
        truth[static_cast<std::size_t>(r)] = r < 20 ? 0 : 1;
        for (Eigen::Index c = 0; c < 5; ++c) blobs(r, c) = rng.normal() + (r < 20 ? 0.0 : 8.0);
    }
    TsneOptions opt;
    opt.perplexity = 10;
    const TsneResult t = tsne(blobs, opt);
    o.expect(t.final_kl < t.initial_kl, fmt::format("KL rose from {} to {}", t.initial_kl, t.final_kl));
    const std::vector<int> found = ward_cluster(t.coords, 2);
    bool recovered = true;
    for (std::size_t k = 0; k < 40; ++k) recovered = recovered && ((found[k] == found[0]) == (truth[k] == truth[0]));
    o.expect(recovered, "two-blob separation not recovered in the embedding");

    std::vector<std::string> journals(40);
    std::vector<int> labels(40);
    const char* names[] = {"JHE", "AER", "HE", "JPubE"};
    for (std::size_t k = 0; k < 40; ++k) journals[k] = names[rng.below(4)], labels[k] = static_cast<int>(rng.below(8));
    const MergedClusters once = merge_by_top_journal(labels, journals);
    const MergedClusters twice = merge_by_top_journal(once.labels, journals);
    o.expect(once.labels == twice.labels, "merge_by_top_journal is not idempotent");

    TempDir dir("acceptance_svg");
    const TsneResult again = tsne(blobs, opt);
    emit_scatter_svg(t.coords, LabelColors{found, {"a", "b"}}, dir.path / "one.svg", {});
    emit_scatter_svg(again.coords, LabelColors{found, {"a", "b"}}, dir.path / "two.svg", {});
    o.expect(read_file(dir.path / "one.svg") == read_file(dir.path / "two.svg"), "SVG bytes differ between runs");
    if (o.ok) o.detail = fmt::format("KL {:.3f} -> {:.3f}, merged {} -> {} clusters", t.initial_kl, t.final_kl, 8,
                                     once.clusters.size());
    return o;
}

// ---------------------------------------------------------------- determinism

Outcome determinism() {
    Outcome o;
    TempDir a("acceptance_det_a"), b("acceptance_det_b");
    std::vector<std::vector<ManifestEntry>> manifests;
    for (const auto* dir : {&a, &b}) {
        RunConfig c;
        c.corpus = kData / "synth2000" / "corpus.jsonl";
        c.registry = kData / "synth2000" / "registry.jsonl";
        c.out = dir->path;
        c.seed = 7;
        o.expect(run("report", c) == 0, "report failed");
        manifests.push_back(read_manifest(c.out));
    }
    if (!o.ok) return o;
    o.expect(!manifests[0].empty(), "empty manifest");
    o.expect(manifests[0].size() == manifests[1].size(), "manifests list different artifacts");
    for (std::size_t k = 0; k < std::min(manifests[0].size(), manifests[1].size()); ++k)
        o.expect(manifests[0][k].path == manifests[1][k].path && manifests[0][k].sha256 == manifests[1][k].sha256,
                 "hash differs for " + manifests[0][k].path);
    if (o.ok) o.detail = fmt::format("{} artifacts with identical hashes", manifests[0].size());
    return o;
}

}  // namespace

int main() {
    bool ok = true;
    ok &= run_criterion("identity-suite", 5, identity_suite);
    ok &= run_criterion("similarity-oracle", 30, similarity_oracle);
    ok &= run_criterion("classifier-suite", 60, classifier_suite);
    ok &= run_criterion("table1-structure", 120, table1_structure);
    ok &= run_criterion("econometrics-oracle", 30, econometrics_oracle);
    ok &= run_criterion("map-suite", 120, map_suite);
    ok &= run_criterion("determinism", 180, determinism);
    return ok ? 0 : 1;
}
