#include "scimetrics/svg.hpp"

#include "scimetrics/errors.hpp"
#include "scimetrics/util.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace scimetrics {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
                                    "#8c6d31", "#843c39", "#7b4173", "#3182bd", "#e6550d", "#31a354",
                                    "#756bb1", "#636363", "#6baed6", "#fd8d3c", "#74c476", "#9e9ac8"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// blue (0) -> grey (0.5) -> red (1)
std::string ramp(double p) {
    p = std::clamp(p, 0.0, 1.0);
    auto lerp = [](int a, int b, double t) { return static_cast<int>(std::lround(a + (b - a) * t)); };
    int r, g, b;
    if (p < 0.5) {
        const double t = p / 0.5;
        r = lerp(33, 190, t), g = lerp(102, 190, t), b = lerp(172, 190, t);
    } else {
        const double t = (p - 0.5) / 0.5;
        r = lerp(190, 178, t), g = lerp(190, 24, t), b = lerp(190, 43, t);
    }
    return fmt::format("#{:02x}{:02x}{:02x}", r, g, b);
}

struct Box {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
};

Box bounds(const std::vector<std::pair<double, double>>& pts) {
    Box b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& [x, y] : pts) {
        b.x0 = std::min(b.x0, x);
        b.x1 = std::max(b.x1, x);
        b.y0 = std::min(b.y0, y);
        b.y1 = std::max(b.y1, y);
    }
    if (pts.empty()) return Box{};
    if (b.x1 - b.x0 < 1e-12) b.x0 -= 0.5, b.x1 += 0.5;
    if (b.y1 - b.y0 < 1e-12) b.y0 -= 0.5, b.y1 += 0.5;
    return b;
}

std::string header(const PlotFrame& f) {
    std::string s = fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
        "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
        f.width, f.height);
    if (!f.title.empty())
        s += fmt::format("<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
                         f.width / 2, escape(f.title));
    return s;
}

// plot area leaves room on the right for the legend
struct Area {
    double left, top, right, bottom;
};

Area plot_area(const PlotFrame& f) { return {60.0, 40.0, f.width - 200.0, f.height - 50.0}; }

}  // namespace

std::string scatter_svg(const std::vector<Point2>& coords, const ColorSource& colors, const PlotFrame& frame) {
    for (const auto& p : coords)
        if (!std::isfinite(p[0]) || !std::isfinite(p[1])) throw DataError("scatter: non-finite coordinate");
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : coords) pts.emplace_back(p[0], p[1]);
    const Box b = bounds(pts);
    const Area a = plot_area(frame);
    auto sx = [&](double x) { return a.left + (x - b.x0) / (b.x1 - b.x0) * (a.right - a.left); };
    auto sy = [&](double y) { return a.bottom - (y - b.y0) / (b.y1 - b.y0) * (a.bottom - a.top); };

    std::string s = header(frame);
    s += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" stroke=\"#cccccc\"/>\n",
                     a.left, a.top, a.right - a.left, a.bottom - a.top);
    s += "<g id=\"points\">\n";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        std::string fill;
        if (const auto* pc = std::get_if<ProbabilityColors>(&colors)) {
            fill = ramp(i < pc->values.size() ? pc->values[i] : 0.5);
        } else {
            const auto& lc = std::get<LabelColors>(colors);
            const int l = i < lc.labels.size() ? lc.labels[i] : 0;
            fill = kPalette[static_cast<std::size_t>(std::max(l, 0)) % kPaletteSize];
        }
        s += fmt::format("<circle class=\"pt\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"{}\" fill-opacity=\"0.8\"/>\n",
                         sx(coords[i][0]), sy(coords[i][1]), fill);
    }
    s += "</g>\n<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
    const double lx = a.right + 16;
    if (const auto* pc = std::get_if<ProbabilityColors>(&colors)) {
        s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", lx, a.top + 10, escape(pc->legend_title));
        for (int k = 0; k <= 10; ++k) {
            const double p = k / 10.0;
            const double y = a.top + 20 + k * 16;
            s += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"14\" height=\"14\" fill=\"{}\"/>\n", lx, y, ramp(p));
            s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{:.1f}</text>\n", lx + 20, y + 11, p);
        }
    } else {
        const auto& lc = std::get<LabelColors>(colors);
        for (std::size_t k = 0; k < lc.names.size(); ++k) {
            const double y = a.top + k * 16;
            s += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"14\" height=\"14\" fill=\"{}\"/>\n", lx, y,
                             kPalette[k % kPaletteSize]);
            s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", lx + 20, y + 11, escape(lc.names[k]));
        }
    }
    s += "</g>\n</svg>\n";
    return s;
}

void emit_scatter_svg(const std::vector<Point2>& coords, const ColorSource& colors, const std::filesystem::path& path,
                      const PlotFrame& frame) {
    if (coords.empty()) log_warning("scatter plot " + path.string() + " has no points");
    write_file(path, scatter_svg(coords, colors, frame));
}

std::string line_chart_svg(const std::vector<LineSeries>& series, const PlotFrame& frame, const std::string& x_label,
                           const std::string& y_label) {
    std::vector<std::pair<double, double>> all;
    for (const auto& s : series) all.insert(all.end(), s.points.begin(), s.points.end());
    for (const auto& [x, y] : all)
        if (!std::isfinite(x) || !std::isfinite(y)) throw DataError("line chart: non-finite value");
    const Box b = bounds(all);
    const Area a = plot_area(frame);
    auto sx = [&](double x) { return a.left + (x - b.x0) / (b.x1 - b.x0) * (a.right - a.left); };
    auto sy = [&](double y) { return a.bottom - (y - b.y0) / (b.y1 - b.y0) * (a.bottom - a.top); };

    std::string out = header(frame);
    out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" stroke=\"#cccccc\"/>\n",
                       a.left, a.top, a.right - a.left, a.bottom - a.top);
    out += fmt::format("<g font-family=\"sans-serif\" font-size=\"11\">\n"
                       "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n"
                       "<text x=\"14\" y=\"{:.1f}\" transform=\"rotate(-90 14 {:.1f})\" text-anchor=\"middle\">{}</text>\n",
                       (a.left + a.right) / 2, a.bottom + 36, escape(x_label), (a.top + a.bottom) / 2,
                       (a.top + a.bottom) / 2, escape(y_label));
    for (int k = 0; k <= 4; ++k) {
        const double xv = b.x0 + (b.x1 - b.x0) * k / 4.0, yv = b.y0 + (b.y1 - b.y0) * k / 4.0;
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.4g}</text>\n", sx(xv), a.bottom + 16, xv);
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.4g}</text>\n", a.left - 4, sy(yv) + 4, yv);
    }
    out += "</g>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        std::string path;
        for (std::size_t m = 0; m < series[k].points.size(); ++m) {
            const auto& [x, y] = series[k].points[m];
            path += fmt::format("{}{:.2f},{:.2f}", m == 0 ? "M" : " L", sx(x), sy(y));
        }
        out += fmt::format("<path class=\"series\" d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n", path,
                           kPalette[k % kPaletteSize]);
        const double ly = a.top + k * 16;
        out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"14\" height=\"4\" fill=\"{}\"/>\n", a.right + 16, ly + 5,
                           kPalette[k % kPaletteSize]);
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                           a.right + 36, ly + 11, escape(series[k].name));
    }
    out += "</svg>\n";
    return out;
}

std::string histogram_svg(const std::vector<std::pair<std::string, std::vector<std::size_t>>>& series,
                          const PlotFrame& frame) {
    std::vector<LineSeries> lines;
    for (const auto& [name, counts] : series) {
        LineSeries ls{name, {}};
        const double w = counts.empty() ? 1.0 : 1.0 / static_cast<double>(counts.size());
        for (std::size_t b = 0; b < counts.size(); ++b) {
            const double c = static_cast<double>(counts[b]);
            ls.points.emplace_back(b * w, c);
            ls.points.emplace_back((b + 1) * w, c);
        }
        lines.push_back(std::move(ls));
    }
    return line_chart_svg(lines, frame, "probability", "papers");
}

}  // namespace scimetrics
