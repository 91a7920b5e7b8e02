#include "scimetrics/reports.hpp"

#include "scimetrics/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace scimetrics {

std::string_view stream_symbol(Stream s) noexcept {
    switch (s) {
        case Stream::Journal: return "p_J";
        case Stream::Author: return "p_A";
        case Stream::Combined: return "p_C";
    }
    return "?";
}

std::span<const double> EvalSample::stream(Stream s) const {
    switch (s) {
        case Stream::Journal: return p_journal;
        case Stream::Author: return p_author;
        case Stream::Combined: return p_combined;
    }
    return {};
}

EvalSample concat(const EvalSample& a, const EvalSample& b, std::string name) {
    EvalSample out = a;
    out.name = std::move(name);
    out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
    out.p_journal.insert(out.p_journal.end(), b.p_journal.begin(), b.p_journal.end());
    out.p_author.insert(out.p_author.end(), b.p_author.begin(), b.p_author.end());
    out.p_combined.insert(out.p_combined.end(), b.p_combined.begin(), b.p_combined.end());
    return out;
}

PerformanceTable performance_table(const EvalSample& journal, const EvalSample& author,
                                   const std::vector<std::pair<Stream, double>>& criteria) {
    const EvalSample combined = concat(journal, author, "Combined");
    const EvalSample* samples[] = {&journal, &author, &combined};
    PerformanceTable t;
    for (const auto* s : samples) {
        t.sample_names.push_back(s->name);
        t.sample_sizes.push_back(s->size());
    }
    for (const auto& [stream, cutoff] : criteria) {
        CriterionRow row{stream, cutoff, {}};
        for (const auto* s : samples) {
            if (s->size() == 0) {
                row.per_sample.push_back({});
                continue;
            }
            row.per_sample.push_back(metrics(confusion(s->labels, s->stream(stream), cutoff)));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace {
std::string cell(const std::optional<double>& v) { return v ? fmt::format("{:.3f}", *v) : std::string("."); }
}  // namespace

std::string format_performance_table(const PerformanceTable& t) {
    std::string out;
    out += fmt::format("{:<12}", "");
    for (std::size_t s = 0; s < t.sample_names.size(); ++s)
        out += fmt::format("{:^36}", fmt::format("{} Sample (N={})", t.sample_names[s], t.sample_sizes[s]));
    out += "\n";
    out += fmt::format("{:<12}", "Criterion");
    for (std::size_t s = 0; s < t.sample_names.size(); ++s)
        out += fmt::format("{:>12}{:>12}{:>12}", "Sensitivity", "Specificity", "F1");
    out += "\n";
    out += std::string(12 + 36 * t.sample_names.size(), '-') + "\n";
    for (const auto& row : t.rows) {
        out += fmt::format("{:<12}", fmt::format("{}>{:.3f}", stream_symbol(row.stream), row.cutoff));
        for (const auto& m : row.per_sample)
            out += fmt::format("{:>12}{:>12}{:>12}", cell(m.sensitivity), cell(m.specificity), cell(m.f1));
        out += "\n";
    }
    return out;
}

std::string stars(double coef, double se) {
    if (!(se > 0.0)) return "";
    const double t = std::abs(coef / se);
    const double p = std::erfc(t / std::sqrt(2.0));
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "";
}

std::string format_regression_table(const std::string& title, const std::vector<RegressionResult>& columns,
                                    const std::vector<std::string>& row_order,
                                    const std::vector<std::string>& column_groups) {
    constexpr int label_w = 28, col_w = 14;
    std::string out = title + "\n";
    if (!column_groups.empty()) {
        out += fmt::format("{:<{}}", "", label_w);
        const std::size_t per = columns.size() / column_groups.size();
        for (const auto& g : column_groups) out += fmt::format("{:^{}}", g, static_cast<int>(per) * col_w);
        out += "\n";
    }
    out += fmt::format("{:<{}}", "", label_w);
    for (std::size_t c = 0; c < columns.size(); ++c) out += fmt::format("{:>{}}", fmt::format("({})", c + 1), col_w);
    out += "\n" + std::string(label_w + col_w * columns.size(), '-') + "\n";
    for (const auto& name : row_order) {
        bool any = false;
        for (const auto& col : columns)
            for (const auto& n : col.names) any = any || n == name;
        if (!any) continue;
        std::string est = fmt::format("{:<{}}", name, label_w), err = fmt::format("{:<{}}", "", label_w);
        for (const auto& col : columns) {
            std::size_t k = 0;
            while (k < col.names.size() && col.names[k] != name) ++k;
            if (k == col.names.size()) {
                est += fmt::format("{:>{}}", "", col_w);
                err += fmt::format("{:>{}}", "", col_w);
            } else {
                est += fmt::format("{:>{}}", fmt::format("{:.3f}{}", col.coef[k], stars(col.coef[k], col.se[k])), col_w);
                err += fmt::format("{:>{}}", fmt::format("({:.3f})", col.se[k]), col_w);
            }
        }
        out += est + "\n" + err + "\n";
    }
    out += std::string(label_w + col_w * columns.size(), '-') + "\n";
    std::string obs = fmt::format("{:<{}}", "Observations", label_w), r2 = fmt::format("{:<{}}", "R-squared", label_w),
                fe = fmt::format("{:<{}}", "Journal FE", label_w);
    for (const auto& col : columns) {
        obs += fmt::format("{:>{}}", col.n, col_w);
        r2 += fmt::format("{:>{}}", fmt::format("{:.3f}", col.r2), col_w);
        fe += fmt::format("{:>{}}", col.fixed_effects ? "Yes" : "No", col_w);
    }
    out += obs + "\n" + r2 + "\n" + fe + "\n";
    out += "Standard errors in parentheses. * p < 0.05, ** p < 0.01, *** p < 0.001\n";
    return out;
}

}  // namespace scimetrics
