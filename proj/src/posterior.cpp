#include "rlx/posterior.hpp"

#include "rlx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rlx {

NormalGammaParams NormalGammaParams::updated(double reward) const noexcept {
    NormalGammaParams out;
    out.lambda = lambda + 1.0;
    out.mu0 = (lambda * mu0 + reward) / out.lambda;
    out.alpha = alpha + 0.5;
    const double dev = reward - mu0;
    out.beta = beta + lambda * dev * dev / (2.0 * out.lambda);
    return out;
}

double NormalGammaParams::mean_std() const noexcept {
    if (alpha > 1.0)
        return std::sqrt(beta / (lambda * (alpha - 1.0)));
    return std::sqrt(beta / (lambda * alpha));
}

NormalGammaParams NormalGammaParams::with_mean_variance(double mean, double variance, double shape) noexcept {
    return {mean, 1.0, shape, variance * (shape - 1.0)};
}

NormalGammaParams NormalGammaParams::known(double mean) noexcept {
    return {mean, kKnownPseudoObservations, 2.0, 1.0 / kKnownPseudoObservations};
}

Posterior::Posterior(int num_states, int num_actions, int horizon, bool stationary, const PriorConfig& prior)
    : states_(num_states), actions_(num_actions), horizon_(horizon), stationary_(stationary) {
    if (num_states <= 0 || num_actions <= 0 || horizon <= 0)
        throw StructuralError("Posterior dimensions must be positive");
    const std::size_t cells = std::size_t(num_layers()) * states_ * actions_;
    counts_.assign(cells * states_, prior.dirichlet);
    rewards_.assign(cells, prior.reward);
    rho_.assign(states_, 0.0);
    rho_[0] = 1.0;
    validate();
}

void Posterior::validate() const {
    const std::size_t cells = std::size_t(num_layers()) * states_ * actions_;
    if (counts_.size() != cells * states_ || rewards_.size() != cells || rho_.size() != std::size_t(states_))
        throw StructuralError("Posterior table sizes do not match (H, S, A)");
    for (std::size_t c = 0; c < cells; ++c) {
        double total = 0.0;
        for (int n = 0; n < states_; ++n) {
            const double k = counts_[c * states_ + n];
            if (!std::isfinite(k) || k < 0.0)
                throw InputError("Dirichlet pseudo-counts must be finite and nonnegative (cell " +
                                 std::to_string(c) + ")");
            total += k;
        }
        if (!(total > 0.0))
            throw InputError("Dirichlet row " + std::to_string(c) + " has no positive pseudo-count");
        const auto& ng = rewards_[c];
        if (!std::isfinite(ng.mu0) || !(ng.lambda > 0.0) || !(ng.alpha > 0.0) || !(ng.beta > 0.0) ||
            !std::isfinite(ng.lambda) || !std::isfinite(ng.alpha) || !std::isfinite(ng.beta))
            throw InputError("Normal-Gamma cell " + std::to_string(c) + " needs lambda, alpha, beta > 0");
    }
}

void Posterior::observe(const Observation& obs) {
    const std::size_t len = obs.states.size();
    if (obs.actions.size() != len || obs.rewards.size() != len)
        throw InputError("observation lists have different lengths");
    if (len > std::size_t(horizon_))
        throw InputError("observation longer than the horizon");
    for (std::size_t t = 0; t < len; ++t) {
        const int s = obs.states[t];
        const int a = obs.actions[t];
        if (s < 0 || s >= states_ || a < 0 || a >= actions_)
            throw InputError("observation index out of range at step " + std::to_string(t));
        if (t + 1 < len && (obs.states[t + 1] < 0 || obs.states[t + 1] >= states_))
            throw InputError("observation state out of range at step " + std::to_string(t + 1));
    }
    for (std::size_t t = 0; t < len; ++t) {
        const int layer = layer_of(int(t));
        const int s = obs.states[t];
        const int a = obs.actions[t];
        auto& ng = rewards_[cell(layer, s, a)];
        ng = ng.updated(obs.rewards[t]);
        if (t + 1 < len)
            counts_[cell(layer, s, a) * states_ + obs.states[t + 1]] += 1.0;
    }
}

Posterior update(Posterior posterior, const Observation& obs) {
    posterior.observe(obs);
    return posterior;
}

namespace {

void sample_dirichlet(std::span<const double> counts, std::span<double> out, Rng& rng) {
    int support = 0;
    int only = 0;
    for (int i = 0; i < int(counts.size()); ++i) {
        if (counts[i] > 0.0) {
            ++support;
            only = i;
        }
    }
    std::fill(out.begin(), out.end(), 0.0);
    if (support == 1) {
        out[only] = 1.0;
        return;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0.0) {
            std::gamma_distribution<double> g(counts[i], 1.0);
            out[i] = g(rng);
            total += out[i];
        }
    }
    if (!(total > 0.0)) {
        // every draw underflowed (tiny pseudo-counts); fall back to the largest count
        out[argmax_lowest(counts)] = 1.0;
        return;
    }
    for (double& p : out)
        p /= total;
}

} // namespace

TabularMDP sample_mdp(const Posterior& posterior, Rng& rng, SampledRewardNoise noise) {
    const int S = posterior.num_states();
    const int A = posterior.num_actions();
    TabularMDP mdp(S, A, posterior.horizon(), posterior.stationary());
    std::copy(posterior.initial_distribution().begin(), posterior.initial_distribution().end(),
              mdp.initial_distribution().begin());
    std::normal_distribution<double> std_normal(0.0, 1.0);
    for (int l = 0; l < posterior.num_layers(); ++l) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                sample_dirichlet(posterior.dirichlet(l, s, a), mdp.transition_row(l, s, a), rng);
                const auto& ng = posterior.normal_gamma(l, s, a);
                std::gamma_distribution<double> precision_dist(ng.alpha, 1.0 / ng.beta);
                const double precision = precision_dist(rng);
                const double mean = ng.mu0 + std_normal(rng) / std::sqrt(ng.lambda * precision);
                mdp.set_mean_reward(l, s, a, mean);
                if (noise == SampledRewardNoise::from_precision)
                    mdp.set_reward_std(l, s, a, 1.0 / std::sqrt(precision));
            }
        }
    }
    return mdp;
}

TabularMDP mean_mdp(const Posterior& posterior) {
    const int S = posterior.num_states();
    const int A = posterior.num_actions();
    TabularMDP mdp(S, A, posterior.horizon(), posterior.stationary());
    std::copy(posterior.initial_distribution().begin(), posterior.initial_distribution().end(),
              mdp.initial_distribution().begin());
    for (int l = 0; l < posterior.num_layers(); ++l) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                auto counts = posterior.dirichlet(l, s, a);
                const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
                auto row = mdp.transition_row(l, s, a);
                for (int n = 0; n < S; ++n)
                    row[n] = counts[n] / total;
                mdp.set_mean_reward(l, s, a, posterior.normal_gamma(l, s, a).mu0);
            }
        }
    }
    return mdp;
}

} // namespace rlx
