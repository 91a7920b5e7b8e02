#include "scimetrics/econometrics.hpp"

#include "scimetrics/errors.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scimetrics {

CitationNormalization parse_citation_normalization(std::string_view s) {
    if (s == "year-mean") return CitationNormalization::YearMean;
    if (s == "log1p") return CitationNormalization::Log1p;
    throw ConfigError(fmt::format("citation normalization must be 'year-mean' or 'log1p', got '{}'", s));
}

std::vector<double> normalize_citations(const Corpus& corpus, CitationNormalization method) {
    std::vector<double> out(corpus.size());
    if (method == CitationNormalization::Log1p) {
        for (std::size_t i = 0; i < corpus.size(); ++i)
            out[i] = std::log1p(static_cast<double>(corpus.paper(i).citations));
        return out;
    }
    for (const auto& [year, papers] : corpus.year_index()) {
        double sum = 0.0;
        for (std::size_t i : papers) sum += static_cast<double>(corpus.paper(i).citations);
        if (!(sum > 0.0)) throw DataError(fmt::format("year {} has zero mean citations", year));
        const double mean = sum / static_cast<double>(papers.size());
        for (std::size_t i : papers) out[i] = static_cast<double>(corpus.paper(i).citations) / mean;
    }
    return out;
}

double RegressionResult::coefficient(std::string_view name) const {
    for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k] == name) return coef[k];
    throw DataError(fmt::format("no coefficient named '{}'", name));
}

double RegressionResult::std_error(std::string_view name) const {
    for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k] == name) return se[k];
    throw DataError(fmt::format("no coefficient named '{}'", name));
}

namespace {

void demean_by_group(Eigen::Ref<Eigen::VectorXd> v, std::span<const std::size_t> g, std::size_t n_groups) {
    std::vector<double> sum(n_groups, 0.0);
    std::vector<std::size_t> cnt(n_groups, 0);
    for (Eigen::Index r = 0; r < v.size(); ++r) {
        sum[g[r]] += v[r];
        ++cnt[g[r]];
    }
    for (Eigen::Index r = 0; r < v.size(); ++r) v[r] -= sum[g[r]] / static_cast<double>(cnt[g[r]]);
}

// Compacts group ids of kept rows to 0..G-1.
std::size_t compact(std::vector<std::size_t>& g) {
    std::vector<std::size_t> ids = g;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (auto& x : g) x = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
    return ids.size();
}

}  // namespace

RegressionResult ols(std::span<const double> y, std::span<const Regressor> x, std::span<const std::size_t> groups) {
    const std::size_t rows = y.size();
    for (const auto& col : x)
        if (col.values.size() != rows) throw DataError(fmt::format("regressor '{}' has the wrong length", col.name));
    const bool fe = !groups.empty();
    if (fe && groups.size() != rows) throw DataError("fixed-effect groups have the wrong length");

    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < rows; ++r) {
        bool ok = std::isfinite(y[r]);
        for (const auto& col : x) ok = ok && std::isfinite(col.values[r]);
        if (ok) keep.push_back(r);
    }
    const std::size_t n = keep.size();
    const std::size_t k = x.size() + (fe ? 0 : 1);
    if (k == 0) throw DataError("regression without regressors");

    std::vector<std::size_t> g;
    std::size_t n_groups = 0;
    if (fe) {
        for (std::size_t r : keep) g.push_back(groups[r]);
        n_groups = compact(g);
    }
    const std::size_t absorbed = fe ? n_groups : 0;
    if (n <= k + absorbed) throw DataError(fmt::format("insufficient observations: n={} for {} parameters", n, k + absorbed));

    Eigen::VectorXd yv(n);
    Eigen::MatrixXd xm(n, k);
    for (std::size_t r = 0; r < n; ++r) {
        yv[r] = y[keep[r]];
        std::size_t c = 0;
        if (!fe) xm(r, c++) = 1.0;
        for (const auto& col : x) xm(r, c++) = col.values[keep[r]];
    }
    const double ybar = yv.mean();
    const double tss = (yv.array() - ybar).square().sum();
    if (fe) {
        demean_by_group(yv, g, n_groups);
        for (Eigen::Index c = 0; c < xm.cols(); ++c) demean_by_group(xm.col(c), g, n_groups);
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xm);
    qr.setThreshold(1e-10);
    if (static_cast<std::size_t>(qr.rank()) < k) throw RankDeficient("design matrix is rank deficient");
    const Eigen::VectorXd beta = qr.solve(yv);
    const Eigen::VectorXd resid = yv - xm * beta;
    const double ssr = resid.squaredNorm();
    const double dof = static_cast<double>(n - k - absorbed);

    // (X'X)^{-1} = P R^{-1} R^{-T} P'
    const Eigen::MatrixXd r_upper = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv = r_upper.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::MatrixXd cov_perm = r_inv * r_inv.transpose();
    const auto& perm = qr.colsPermutation();
    const Eigen::MatrixXd xtx_inv = perm * cov_perm * perm.transpose();

    RegressionResult res;
    res.fixed_effects = fe;
    res.groups = absorbed;
    res.n = n;
    res.sigma2 = ssr / dof;
    res.r2 = tss > 0.0 ? 1.0 - ssr / tss : 1.0;
    if (!fe) res.names.push_back("const");
    for (const auto& col : x) res.names.push_back(col.name);
    for (std::size_t c = 0; c < k; ++c) {
        res.coef.push_back(beta[static_cast<Eigen::Index>(c)]);
        res.se.push_back(std::sqrt(std::max(0.0, res.sigma2 * xtx_inv(c, c))));
    }
    return res;
}

RegressionResult interaction_model(std::span<const double> y, const Regressor& indicator, std::span<const Regressor> x,
                                   std::span<const std::size_t> groups) {
    for (double v : indicator.values)
        if (std::isfinite(v) && v != 0.0 && v != 1.0)
            throw DataError(fmt::format("indicator '{}' is not binary", indicator.name));
    std::vector<Regressor> design(x.begin(), x.end());
    design.push_back(indicator);
    for (const auto& col : x) {
        Regressor inter{indicator.name + " x " + col.name, std::vector<double>(col.values.size())};
        for (std::size_t r = 0; r < col.values.size(); ++r) inter.values[r] = indicator.values[r] * col.values[r];
        design.push_back(std::move(inter));
    }
    return ols(y, design, groups);
}

double correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DataError("correlation inputs differ in length");
    double sa = 0, sb = 0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (std::isfinite(a[k]) && std::isfinite(b[k])) {
            sa += a[k];
            sb += b[k];
            ++n;
        }
    if (n < 2) throw DataError("correlation needs at least two paired values");
    const double ma = sa / static_cast<double>(n), mb = sb / static_cast<double>(n);
    double saa = 0, sbb = 0, sab = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (std::isfinite(a[k]) && std::isfinite(b[k])) {
            saa += (a[k] - ma) * (a[k] - ma);
            sbb += (b[k] - mb) * (b[k] - mb);
            sab += (a[k] - ma) * (b[k] - mb);
        }
    if (!(saa > 0.0) || !(sbb > 0.0)) throw DataError("correlation of a zero-variance variable");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> residualize(std::span<const double> values, std::span<const std::size_t> groups) {
    if (values.size() != groups.size()) throw DataError("residualize: groups have the wrong length");
    const std::size_t n_groups = groups.empty() ? 0 : *std::max_element(groups.begin(), groups.end()) + 1;
    std::vector<double> sum(n_groups, 0.0);
    std::vector<std::size_t> cnt(n_groups, 0);
    double grand = 0.0;
    std::size_t n = 0;
    for (std::size_t r = 0; r < values.size(); ++r)
        if (std::isfinite(values[r])) {
            sum[groups[r]] += values[r];
            ++cnt[groups[r]];
            grand += values[r];
            ++n;
        }
    if (n > 0) grand /= static_cast<double>(n);
    std::vector<double> out(values.size(), kMissing);
    for (std::size_t r = 0; r < values.size(); ++r)
        if (std::isfinite(values[r])) out[r] = values[r] - sum[groups[r]] / static_cast<double>(cnt[groups[r]]) + grand;
    return out;
}

std::vector<Bin> binned_scatter(std::span<const double> x, std::span<const double> y, std::size_t n_bins,
                                std::span<const std::size_t> groups) {
    if (x.size() != y.size()) throw DataError("binned scatter inputs differ in length");
    if (n_bins == 0) throw DataError("binned scatter needs at least one bin");
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < x.size(); ++r)
        if (std::isfinite(x[r]) && std::isfinite(y[r])) keep.push_back(r);
    std::vector<double> xs, ys;
    std::vector<std::size_t> gs;
    for (std::size_t r : keep) {
        xs.push_back(x[r]);
        ys.push_back(y[r]);
        if (!groups.empty()) gs.push_back(groups[r]);
    }
    const std::size_t n = xs.size();
    if (n < n_bins) throw DataError(fmt::format("binned scatter: {} observations for {} bins", n, n_bins));
    if (!groups.empty()) {
        compact(gs);
        xs = residualize(xs, gs);
        ys = residualize(ys, gs);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<Bin> bins(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        const std::size_t lo = b * n / n_bins, hi = (b + 1) * n / n_bins;
        double sx = 0, sy = 0;
        for (std::size_t k = lo; k < hi; ++k) {
            sx += xs[order[k]];
            sy += ys[order[k]];
        }
        const double c = static_cast<double>(hi - lo);
        bins[b] = {sx / c, sy / c, hi - lo};
    }
    return bins;
}

std::vector<SeriesPoint> annual_series(std::span<const double> values, std::span<const int> years,
                                       std::span<const int> health, std::span<const std::size_t> fixed_effects) {
    if (values.size() != years.size() || values.size() != health.size())
        throw DataError("annual series inputs differ in length");
    std::vector<double> adjusted(values.begin(), values.end());
    if (!fixed_effects.empty()) adjusted = residualize(values, fixed_effects);
    std::map<std::pair<int, int>, std::pair<double, std::size_t>> acc;
    for (std::size_t r = 0; r < adjusted.size(); ++r) {
        if (!std::isfinite(adjusted[r])) continue;
        auto& [sum, cnt] = acc[{years[r], health[r] ? 1 : 0}];
        sum += adjusted[r];
        ++cnt;
    }
    if (acc.empty()) throw DataError("annual series of an empty sample");
    std::vector<SeriesPoint> out;
    for (const auto& [key, sc] : acc)
        out.push_back({key.first, key.second, sc.first / static_cast<double>(sc.second), sc.second});
    return out;
}

std::vector<SharePoint> share_series(std::span<const int> years, std::span<const std::string> outlets,
                                     std::span<const int> health) {
    if (years.size() != outlets.size() || years.size() != health.size())
        throw DataError("share series inputs differ in length");
    std::map<std::pair<std::string, int>, std::pair<std::size_t, std::size_t>> acc;
    for (std::size_t r = 0; r < years.size(); ++r) {
        auto& [pos, cnt] = acc[{outlets[r], years[r]}];
        pos += health[r] ? 1 : 0;
        ++cnt;
    }
    std::vector<SharePoint> out;
    for (const auto& [key, pc] : acc)
        out.push_back({key.second, key.first, static_cast<double>(pc.first) / static_cast<double>(pc.second), pc.second});
    return out;
}

double Crosstab::row_share(std::size_t r, std::size_t c) const {
    const std::size_t total = std::accumulate(counts[r].begin(), counts[r].end(), std::size_t{0});
    return total ? static_cast<double>(counts[r][c]) / static_cast<double>(total) : 0.0;
}

double Crosstab::col_share(std::size_t r, std::size_t c) const {
    std::size_t total = 0;
    for (const auto& row : counts) total += row[c];
    return total ? static_cast<double>(counts[r][c]) / static_cast<double>(total) : 0.0;
}

double Crosstab::cell_share(std::size_t r, std::size_t c) const {
    return n ? static_cast<double>(counts[r][c]) / static_cast<double>(n) : 0.0;
}

Crosstab crosstab(const std::map<std::string, std::string, std::less<>>& class_a,
                  const std::map<std::string, std::string, std::less<>>& class_b) {
    std::map<std::string, std::size_t> rows, cols;
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& [id, la] : class_a) {
        auto it = class_b.find(id);
        if (it == class_b.end()) continue;
        rows.emplace(la, 0);
        cols.emplace(it->second, 0);
        pairs.emplace_back(la, it->second);
    }
    if (pairs.empty()) throw DataError("crosstab: the two classifications share no papers");
    Crosstab t;
    for (auto& [label, idx] : rows) {
        idx = t.rows.size();
        t.rows.push_back(label);
    }
    for (auto& [label, idx] : cols) {
        idx = t.cols.size();
        t.cols.push_back(label);
    }
    t.counts.assign(t.rows.size(), std::vector<std::size_t>(t.cols.size(), 0));
    for (const auto& [a, b] : pairs) ++t.counts[rows[a]][cols[b]];
    t.n = pairs.size();
    return t;
}

std::vector<std::size_t> dense_groups(std::span<const std::string> keys) {
    std::map<std::string_view, std::size_t> ids;
    std::vector<std::size_t> out;
    out.reserve(keys.size());
    for (const auto& k : keys) out.push_back(ids.emplace(k, ids.size()).first->second);
    return out;
}

}  // namespace scimetrics
