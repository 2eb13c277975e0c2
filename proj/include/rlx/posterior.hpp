#pragma once

#include "rlx/mdp.hpp"
#include "rlx/random.hpp"

#include <span>
#include <vector>

namespace rlx {

/// Normal-Gamma belief over the (mean, precision) of a Gaussian reward.
struct NormalGammaParams {
    double mu0 = 0.0;
    double lambda = 1.0;
    double alpha = 1.0;
    double beta = 1.0;

    /// Single-observation conjugate update.
    NormalGammaParams updated(double reward) const noexcept;

    /// Posterior standard deviation of the mean reward, sqrt(beta / (lambda (alpha - 1))).
    /// The marginal variance is infinite for alpha <= 1; there the conditional
    /// std at the expected precision, sqrt(beta / (lambda alpha)), is returned.
    double mean_std() const noexcept;

    /// Prior whose mean marginal is Normal(mean, variance) up to a Student-t
    /// with 2 * shape degrees of freedom. Large shapes approach known variance.
    static NormalGammaParams with_mean_variance(double mean, double variance, double shape = 1e8) noexcept;

    /// Mean pinned at `mean` (posterior std below 1e-15).
    static NormalGammaParams known(double mean) noexcept;

    bool operator==(const NormalGammaParams&) const = default;
};

inline constexpr double kKnownPseudoObservations = 1e30;

struct PriorConfig {
    /// Flat Dirichlet pseudo-count for every successor.
    double dirichlet = 1.0;
    NormalGammaParams reward{};
};

/**
 * Conjugate posterior over an unknown MDP with fixed (S, A, H).
 *
 * One Dirichlet row and one Normal-Gamma cell per (s, a), or per (t, s, a)
 * when not stationary. Dirichlet pseudo-counts may be zero for successors
 * outside the known support, but every row needs a positive total.
 *
 * The initial-state distribution is treated as known and carried along so
 * sampled and mean MDPs are complete.
 */
class Posterior {
public:
    Posterior() = default;
    Posterior(int num_states, int num_actions, int horizon, bool stationary,
              const PriorConfig& prior = {});

    int num_states() const noexcept { return states_; }
    int num_actions() const noexcept { return actions_; }
    int horizon() const noexcept { return horizon_; }
    bool stationary() const noexcept { return stationary_; }
    int num_layers() const noexcept { return stationary_ ? 1 : horizon_; }
    int layer_of(int t) const noexcept { return stationary_ ? 0 : t; }

    std::span<const double> dirichlet(int t, int s, int a) const {
        return {counts_.data() + cell(layer_of(t), s, a) * states_, std::size_t(states_)};
    }
    std::span<double> dirichlet_row(int layer, int s, int a) {
        return {counts_.data() + cell(layer, s, a) * states_, std::size_t(states_)};
    }
    const NormalGammaParams& normal_gamma(int t, int s, int a) const { return rewards_[cell(layer_of(t), s, a)]; }
    NormalGammaParams& normal_gamma_cell(int layer, int s, int a) { return rewards_[cell(layer, s, a)]; }

    std::span<const double> initial_distribution() const noexcept { return rho_; }
    void set_initial_distribution(std::vector<double> rho) { rho_ = std::move(rho); }

    /// Applies one episode in place. Each step bumps the reward cell; every
    /// step but the last also bumps the Dirichlet count of the next state.
    void observe(const Observation& obs);

    /// Throws StructuralError or InputError.
    void validate() const;

    bool operator==(const Posterior&) const = default;

private:
    std::size_t cell(int layer, int s, int a) const noexcept {
        return (std::size_t(layer) * states_ + s) * actions_ + a;
    }

    int states_ = 0;
    int actions_ = 0;
    int horizon_ = 0;
    bool stationary_ = true;
    std::vector<double> counts_;
    std::vector<NormalGammaParams> rewards_;
    std::vector<double> rho_;
};

/// Returns `posterior` updated with one episode.
Posterior update(Posterior posterior, const Observation& obs);

enum class SampledRewardNoise {
    from_precision, ///< reward std = 1/sqrt(sampled precision)
    deterministic,
};

/// Draws an MDP from the posterior: Dirichlet rows, then per cell a precision
/// from Gamma(alpha, rate beta) and a mean from Normal(mu0, 1/(lambda precision)).
TabularMDP sample_mdp(const Posterior& posterior, Rng& rng,
                      SampledRewardNoise noise = SampledRewardNoise::from_precision);

/// Normalized pseudo-counts and reward means mu0; deterministic rewards.
TabularMDP mean_mdp(const Posterior& posterior);

} // namespace rlx
