#pragma once

#include "rlx/random.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace rlx {

/// Phi(x), via the complementary error function.
double standard_normal_cdf(double x);

/// Posterior probability that a Normal(0, eps^2) value beats the known value 1:
/// Phi(-1/eps). Throws InputError for eps <= 0.
double explore_probability(double eps);

enum class DecisionMode {
    literature_optimism, ///< boost c eps sqrt(scale)
    coherent_optimism,   ///< boost c eps
    randomized,          ///< explore with probability Phi(-1/eps)
};

enum class CoherenceExample { horizon, state };

struct DecisionReport {
    DecisionMode mode;
    CoherenceExample example;
    double eps;
    /// tau for the horizon example, N for the state example.
    int scale;
    double c;
    /// Optimism modes only (0 for randomized).
    double boost = 0.0;
    /// Probability of choosing action 2: 0 or 1 for optimism, Phi(-1/eps) when randomized.
    double explore_probability = 0.0;
    /// 1 or 2 for optimism modes; 0 for randomized (a distribution over actions).
    int chosen_action = 0;

    bool operator==(const DecisionReport&) const = default;
};

/// Decision at the root of the horizon example. Ties (boost exactly 1) choose action 1.
DecisionReport horizon_decision(double eps, int tau, double c, DecisionMode mode);
/// Decision at the root of the state example, with sqrt(N) in place of sqrt(tau).
DecisionReport state_decision(double eps, int n_branches, double c, DecisionMode mode);

struct IncoherenceRegion {
    /// c eps.
    double c_eps;
    /// (1 / (c eps))^2: literature optimism explores iff scale > threshold.
    double threshold;
    /// c eps > 1: the coherent rule explores too, so the rules agree at every scale >= 1.
    bool coherent_explores;

    /// True when the literature and coherent rules choose differently at `scale`.
    bool disagrees_at(int scale) const noexcept;
};

IncoherenceRegion incoherence_region(double eps, double c);

/// Builds `trials` instances of the example, runs one first-episode PSRL plan
/// on each with the matching prior and returns the fraction choosing action 2.
/// Trial i uses stream mix_stream(seed, {i}); the result does not depend on `threads`.
double monte_carlo_explore_frequency(CoherenceExample example, double eps, int scale, std::int64_t trials,
                                     std::uint64_t seed, int threads = 1);

std::string_view to_string(DecisionMode mode) noexcept;
std::string_view to_string(CoherenceExample example) noexcept;

} // namespace rlx
