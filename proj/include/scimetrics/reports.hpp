#pragma once

#include "scimetrics/econometrics.hpp"
#include "scimetrics/probe.hpp"

#include <optional>
#include <string>
#include <vector>

namespace scimetrics {

enum class Stream { Journal, Author, Combined };

std::string_view stream_symbol(Stream s) noexcept;  // "p_J", "p_A", "p_C"

/// One evaluation sample: aligned labels and the three probability streams.
struct EvalSample {
    std::string name;
    std::vector<int> labels;
    std::vector<double> p_journal, p_author, p_combined;

    std::span<const double> stream(Stream s) const;
    std::size_t size() const noexcept { return labels.size(); }
};

/// Union of samples, keeping order.
EvalSample concat(const EvalSample& a, const EvalSample& b, std::string name);

struct CriterionRow {
    Stream stream = Stream::Combined;
    double cutoff = 0.5;
    std::vector<Metrics> per_sample;  // journal, author, combined
};

/// Classifier performance table: one row per (stream, cutoff) criterion,
/// sensitivity/specificity/F1 for the journal, author and combined samples.
struct PerformanceTable {
    std::vector<std::string> sample_names;
    std::vector<std::size_t> sample_sizes;
    std::vector<CriterionRow> rows;
};

PerformanceTable performance_table(const EvalSample& journal, const EvalSample& author,
                                   const std::vector<std::pair<Stream, double>>& criteria);
std::string format_performance_table(const PerformanceTable& t);

/// Significance stars at 0.05 / 0.01 / 0.001 from a normal approximation of t.
std::string stars(double coef, double se);

/// Side-by-side regression columns: coefficient with standard error beneath.
std::string format_regression_table(const std::string& title, const std::vector<RegressionResult>& columns,
                                    const std::vector<std::string>& row_order,
                                    const std::vector<std::string>& column_groups = {});

}  // namespace scimetrics
