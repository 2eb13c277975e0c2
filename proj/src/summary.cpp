#include "rlx/summary.hpp"

#include "rlx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rlx {

double empirical_quantile(std::vector<double> values, double q) {
    if (values.empty())
        throw InputError("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0))
        throw InputError("quantile level must lie in [0, 1]");
    const double h = q * double(values.size() - 1);
    const auto lo = std::size_t(std::floor(h));
    const double frac = h - double(lo);
    std::nth_element(values.begin(), values.begin() + lo, values.end());
    const double below = values[lo];
    if (frac == 0.0 || lo + 1 >= values.size())
        return below;
    // the next order statistic is the minimum of the upper partition
    const double above = *std::min_element(values.begin() + lo + 1, values.end());
    return below + frac * (above - below);
}

std::vector<SummaryRow> summarize(const RegretTable& table, std::span<const double> quantiles) {
    if (table.records.empty())
        throw InputError("cannot summarize an empty regret table");
    if (quantiles.empty())
        throw InputError("at least one quantile is required");

    std::vector<std::string> agents;
    std::map<std::string, std::map<int, std::vector<double>>> by_agent;
    for (const auto& r : table.records) {
        if (!by_agent.contains(r.agent))
            agents.push_back(r.agent);
        by_agent[r.agent][r.episode].push_back(r.cum_regret);
    }

    std::vector<SummaryRow> rows;
    for (const auto& agent : agents)
        for (const auto& [episode, values] : by_agent[agent])
            for (double q : quantiles)
                rows.push_back({agent, episode, q, empirical_quantile(values, q)});
    return rows;
}

} // namespace rlx
