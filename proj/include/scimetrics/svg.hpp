#pragma once

#include "scimetrics/mapviz.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace scimetrics {

/// Continuous colouring by a probability in [0, 1].
struct ProbabilityColors {
    std::vector<double> values;
    std::string legend_title = "probability";
};

/// Categorical colouring; names[label] is the legend entry.
struct LabelColors {
    std::vector<int> labels;
    std::vector<std::string> names;
};

using ColorSource = std::variant<ProbabilityColors, LabelColors>;

struct PlotFrame {
    std::string title;
    int width = 800;
    int height = 600;
};

/// Standalone SVG: one <circle class="pt"> per point plus a legend. Output is
/// a pure function of the inputs.
std::string scatter_svg(const std::vector<Point2>& coords, const ColorSource& colors, const PlotFrame& frame = {});

/// Writes scatter_svg to `path`; warns on empty input. Throws DataError on
/// non-finite coordinates or a write failure.
void emit_scatter_svg(const std::vector<Point2>& coords, const ColorSource& colors, const std::filesystem::path& path,
                      const PlotFrame& frame = {});

struct LineSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

std::string line_chart_svg(const std::vector<LineSeries>& series, const PlotFrame& frame, const std::string& x_label,
                           const std::string& y_label);

/// Overlaid step histograms, one per series, over [0, 1] with equal-width bins.
std::string histogram_svg(const std::vector<std::pair<std::string, std::vector<std::size_t>>>& series,
                          const PlotFrame& frame);

}  // namespace scimetrics
