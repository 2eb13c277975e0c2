#pragma once

#include "rlx/experiment.hpp"

#include <span>
#include <string>
#include <vector>

namespace rlx {

struct SummaryRow {
    std::string agent;
    int episode = 0;
    double quantile = 0.0;
    double cumulative_regret = 0.0;

    bool operator==(const SummaryRow&) const = default;
};

/// Linear-interpolation quantile (Hyndman-Fan type 7) of a non-empty sample.
double empirical_quantile(std::vector<double> values, double q);

/// Per (agent, episode) quantiles of cumulative regret across seeds. Agents
/// keep their first-appearance order; quantiles keep the requested order.
std::vector<SummaryRow> summarize(const RegretTable& table, std::span<const double> quantiles);

} // namespace rlx
