#pragma once

#include "scimetrics/corpus.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace scimetrics {

/// Econometric inputs use NaN for a missing observation; rows with any NaN
/// among the variables of a computation are dropped.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

enum class CitationNormalization {
    YearMean,  // c / mean(c over same-year papers)
    Log1p,     // log(1 + c)
};

CitationNormalization parse_citation_normalization(std::string_view s);

/// Year-normalized citations in corpus order. Throws DataError naming a year
/// whose mean citation count is zero (YearMean only).
std::vector<double> normalize_citations(const Corpus& corpus,
                                        CitationNormalization method = CitationNormalization::YearMean);

struct Regressor {
    std::string name;
    std::vector<double> values;
};

struct RegressionResult {
    std::vector<std::string> names;
    std::vector<double> coef;
    std::vector<double> se;
    std::size_t n = 0;
    std::size_t groups = 0;  // absorbed fixed-effect groups, 0 without FE
    double r2 = 0.0;
    double sigma2 = 0.0;
    bool fixed_effects = false;

    double coefficient(std::string_view name) const;
    double std_error(std::string_view name) const;
};

/// Least squares with homoskedastic standard errors. Without `groups` an
/// intercept column "const" is prepended; with `groups` (one id per row) the
/// group means are swept out instead, which reproduces the dummy-variable
/// estimates. Throws RankDeficient for collinear columns and DataError when
/// there are not more rows than parameters.
RegressionResult ols(std::span<const double> y, std::span<const Regressor> x,
                     std::span<const std::size_t> groups = {});

/// Design [X, indicator, indicator * X]; interaction columns are named
/// "<indicator> x <column>".
RegressionResult interaction_model(std::span<const double> y, const Regressor& indicator,
                                   std::span<const Regressor> x, std::span<const std::size_t> groups = {});

/// Pearson correlation over rows where both values are present.
double correlation(std::span<const double> a, std::span<const double> b);

struct Bin {
    double mean_x = 0.0;
    double mean_y = 0.0;
    std::size_t count = 0;
};

/// Sorts by x and cuts into n_bins bins whose sizes differ by at most one.
/// With groups, x and y are first residualized on group means (grand means
/// added back).
std::vector<Bin> binned_scatter(std::span<const double> x, std::span<const double> y, std::size_t n_bins = 20,
                                std::span<const std::size_t> groups = {});

/// value - group mean + grand mean, over present values.
std::vector<double> residualize(std::span<const double> values, std::span<const std::size_t> groups);

struct SeriesPoint {
    int year = 0;
    int group = 0;  // 1 = health
    double mean = 0.0;
    std::size_t count = 0;
};

/// FE-adjusted means by (year, health group). Empty `fixed_effects` means raw means.
std::vector<SeriesPoint> annual_series(std::span<const double> values, std::span<const int> years,
                                       std::span<const int> health, std::span<const std::size_t> fixed_effects = {});

struct SharePoint {
    int year = 0;
    std::string outlet;
    double share = 0.0;
    std::size_t count = 0;
};

/// Share of health papers by (year, outlet).
std::vector<SharePoint> share_series(std::span<const int> years, std::span<const std::string> outlets,
                                     std::span<const int> health);

struct Crosstab {
    std::vector<std::string> rows;  // labels of classification a
    std::vector<std::string> cols;  // labels of classification b
    std::vector<std::vector<std::size_t>> counts;
    std::size_t n = 0;

    double row_share(std::size_t r, std::size_t c) const;  // P(b = c | a = r)
    double col_share(std::size_t r, std::size_t c) const;  // P(a = r | b = c)
    double cell_share(std::size_t r, std::size_t c) const;
};

Crosstab crosstab(const std::map<std::string, std::string, std::less<>>& class_a,
                  const std::map<std::string, std::string, std::less<>>& class_b);

/// Maps distinct keys to dense ids 0..G-1 in order of first appearance.
std::vector<std::size_t> dense_groups(std::span<const std::string> keys);

}  // namespace scimetrics
