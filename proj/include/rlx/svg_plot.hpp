#pragma once

#include "rlx/summary.hpp"

#include <filesystem>
#include <span>
#include <string>

namespace rlx {

struct PlotOptions {
    int width = 800;
    int height = 500;
    std::string title = "Cumulative regret";
    std::string x_label = "episode";
    std::string y_label = "cumulative regret";
};

/// Standalone SVG with one polyline per (agent, quantile). Output depends only
/// on the inputs.
std::string render_svg(std::span<const SummaryRow> rows, const PlotOptions& options = {});
void render_plot(std::span<const SummaryRow> rows, const std::filesystem::path& path,
                 const PlotOptions& options = {});

} // namespace rlx
