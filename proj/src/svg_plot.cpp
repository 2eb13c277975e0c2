#include "rlx/svg_plot.hpp"

#include "rlx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <vector>

namespace rlx {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

/// 1, 2 or 5 times a power of ten, giving roughly `target` intervals over span.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
    return step * mag;
}

struct Series {
    std::string agent;
    double quantile;
    std::vector<std::pair<double, double>> points;
};

} // namespace

std::string render_svg(std::span<const SummaryRow> rows, const PlotOptions& options) {
    // group rows into series, preserving first-appearance order
    std::vector<Series> series;
    std::map<std::pair<std::string, double>, std::size_t> index;
    std::vector<std::string> agents;
    for (const auto& r : rows) {
        auto key = std::make_pair(r.agent, r.quantile);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, series.size()).first;
            series.push_back({r.agent, r.quantile, {}});
            if (std::find(agents.begin(), agents.end(), r.agent) == agents.end())
                agents.push_back(r.agent);
        }
        series[it->second].points.emplace_back(double(r.episode), r.cumulative_regret);
    }
    if (series.empty())
        throw InputError("render_svg needs at least one series");

    double x_min = series[0].points[0].first, x_max = x_min;
    double y_min = 0.0, y_max = 0.0;
    for (auto& s : series) {
        std::sort(s.points.begin(), s.points.end());
        for (auto [x, y] : s.points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (x_max == x_min)
        x_max = x_min + 1.0;
    const double y_step = nice_step(y_max > y_min ? y_max - y_min : 1.0, 5);
    y_min = std::floor(y_min / y_step) * y_step;
    y_max = std::max(y_min + y_step, std::ceil(y_max / y_step) * y_step);
    const double x_step = nice_step(x_max - x_min, 5);

    const double left = 70, right = 180, top = 40, bottom = 50;
    const double plot_w = options.width - left - right;
    const double plot_h = options.height - top - bottom;
    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return top + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) + "\" height=\"" +
           std::to_string(options.height) + "\" viewBox=\"0 0 " + std::to_string(options.width) + " " +
           std::to_string(options.height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(left + plot_w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" + xml_escape(options.title) + "</text>\n";

    // axes and grid
    svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (double y = y_min; y <= y_max + y_step * 1e-9; y += y_step) {
        svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(py(y)) + "\" x2=\"" + fmt(left + plot_w) + "\" y2=\"" +
               fmt(py(y)) + "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(py(y) + 4) + "\" text-anchor=\"end\">" +
               tick_label(y) + "</text>\n";
    }
    for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max + x_step * 1e-9; x += x_step) {
        svg += "<line x1=\"" + fmt(px(x)) + "\" y1=\"" + fmt(top + plot_h) + "\" x2=\"" + fmt(px(x)) + "\" y2=\"" +
               fmt(top + plot_h + 5) + "\" stroke=\"#333\"/>\n";
        svg += "<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(top + plot_h + 18) + "\" text-anchor=\"middle\">" +
               tick_label(x) + "</text>\n";
    }
    svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left) + "\" y2=\"" +
           fmt(top + plot_h) + "\" stroke=\"#333\"/>\n";
    svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top + plot_h) + "\" x2=\"" + fmt(left + plot_w) +
           "\" y2=\"" + fmt(top + plot_h) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt(left + plot_w / 2) + "\" y=\"" + fmt(options.height - 12.0) +
           "\" text-anchor=\"middle\">" + xml_escape(options.x_label) + "</text>\n";
    svg += "<text x=\"16\" y=\"" + fmt(top + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           fmt(top + plot_h / 2) + ")\">" + xml_escape(options.y_label) + "</text>\n";
    svg += "</g>\n";

    // series
    for (const auto& s : series) {
        const auto color_index = std::find(agents.begin(), agents.end(), s.agent) - agents.begin();
        const char* color = kPalette[color_index % std::size(kPalette)];
        const bool median = s.quantile == 0.5;
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"" +
               (median ? "2" : "1") + "\"" + (median ? "" : " stroke-dasharray=\"6,4\"") + " points=\"";
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            if (i)
                svg += ' ';
            svg += fmt(px(s.points[i].first)) + "," + fmt(py(s.points[i].second));
        }
        svg += "\"/>\n";
    }

    // legend
    svg += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    double ly = top + 10;
    for (const auto& s : series) {
        const auto color_index = std::find(agents.begin(), agents.end(), s.agent) - agents.begin();
        const char* color = kPalette[color_index % std::size(kPalette)];
        const bool median = s.quantile == 0.5;
        const double lx = left + plot_w + 15;
        svg += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(lx + 24) + "\" y2=\"" + fmt(ly) +
               "\" stroke=\"" + color + "\" stroke-width=\"" + (median ? "2" : "1") + "\"" +
               (median ? "" : " stroke-dasharray=\"6,4\"") + "/>\n";
        svg += "<text x=\"" + fmt(lx + 30) + "\" y=\"" + fmt(ly + 4) + "\">" + xml_escape(s.agent) + " q=" +
               tick_label(s.quantile) + "</text>\n";
        ly += 18;
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

void render_plot(std::span<const SummaryRow> rows, const std::filesystem::path& path, const PlotOptions& options) {
    const std::string svg = render_svg(rows, options);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << svg;
}

} // namespace rlx
