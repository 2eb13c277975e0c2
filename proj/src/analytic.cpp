#include "rlx/analytic.hpp"

#include "rlx/agents.hpp"
#include "rlx/environments.hpp"
#include "rlx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace rlx {

std::string_view to_string(DecisionMode mode) noexcept {
    switch (mode) {
    case DecisionMode::literature_optimism: return "literature_optimism";
    case DecisionMode::coherent_optimism: return "coherent_optimism";
    case DecisionMode::randomized: return "randomized";
    }
    return "unknown";
}

std::string_view to_string(CoherenceExample example) noexcept {
    return example == CoherenceExample::horizon ? "horizon" : "state";
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double explore_probability(double eps) {
    if (!(eps > 0.0))
        throw InputError("eps must be positive");
    return standard_normal_cdf(-1.0 / eps);
}

namespace {

DecisionReport decide(CoherenceExample example, double eps, int scale, double c, DecisionMode mode) {
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw InputError("eps must be positive");
    if (scale < 1)
        throw InputError("scale (tau or N) must be at least 1");
    if (!(c >= 0.0) || !std::isfinite(c))
        throw InputError("c must be nonnegative");

    DecisionReport r{mode, example, eps, scale, c};
    switch (mode) {
    case DecisionMode::literature_optimism:
        r.boost = c * eps * std::sqrt(double(scale));
        break;
    case DecisionMode::coherent_optimism:
        r.boost = c * eps;
        break;
    case DecisionMode::randomized:
        r.explore_probability = explore_probability(eps);
        return r;
    }
    // the known action is worth 1, the uncertain one 0 plus its boost
    const bool explore = r.boost > 1.0;
    r.chosen_action = explore ? 2 : 1;
    r.explore_probability = explore ? 1.0 : 0.0;
    return r;
}

} // namespace

DecisionReport horizon_decision(double eps, int tau, double c, DecisionMode mode) {
    return decide(CoherenceExample::horizon, eps, tau, c, mode);
}

DecisionReport state_decision(double eps, int n_branches, double c, DecisionMode mode) {
    return decide(CoherenceExample::state, eps, n_branches, c, mode);
}

IncoherenceRegion incoherence_region(double eps, double c) {
    const double ce = c * eps;
    if (!(ce > 0.0) || !std::isfinite(ce))
        throw InputError("c * eps must be positive");
    return {ce, 1.0 / (ce * ce), ce > 1.0};
}

bool IncoherenceRegion::disagrees_at(int scale) const noexcept {
    if (coherent_explores)
        return false;
    // same comparison as the decision rule, so rounding cannot split them
    return c_eps * std::sqrt(double(scale)) > 1.0;
}

double monte_carlo_explore_frequency(CoherenceExample example, double eps, int scale, std::int64_t trials,
                                     std::uint64_t seed, int threads) {
    if (trials < 1)
        throw InputError("trials must be at least 1");
    CoherenceParams params;
    params.eps = eps;
    if (example == CoherenceExample::horizon)
        params.tau = scale;
    else
        params.n_branches = scale;
    params.validate();
    const Posterior prior = example == CoherenceExample::horizon ? horizon_example_prior(params)
                                                                 : state_example_prior(params);

    auto run_range = [&](std::int64_t begin, std::int64_t end) {
        std::int64_t explored = 0;
        for (std::int64_t i = begin; i < end; ++i) {
            Rng rng = make_rng(mix_stream(seed, {std::uint64_t(i)}));
            // a fresh instance per trial; its truth does not enter the first plan
            const TabularMDP instance = example == CoherenceExample::horizon ? make_horizon_example(params, rng)
                                                                             : make_state_example(params, rng);
            const Policy policy = psrl_plan(prior, rng);
            check_policy(instance, policy);
            if (policy(0, kRootState) == kUncertainAction)
                ++explored;
        }
        return explored;
    };

    threads = std::max(1, threads);
    std::int64_t explored = 0;
    if (threads == 1) {
        explored = run_range(0, trials);
    } else {
        std::vector<std::int64_t> partial(threads, 0);
        std::vector<std::thread> pool;
        const std::int64_t chunk = (trials + threads - 1) / threads;
        for (int k = 0; k < threads; ++k) {
            const std::int64_t b = std::min(trials, k * chunk);
            const std::int64_t e = std::min(trials, b + chunk);
            pool.emplace_back([&, k, b, e] { partial[k] = run_range(b, e); });
        }
        for (auto& th : pool)
            th.join();
        for (auto p : partial)
            explored += p;
    }
    return double(explored) / double(trials);
}

} // namespace rlx
