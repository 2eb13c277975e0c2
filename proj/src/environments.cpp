#include "rlx/environments.hpp"

#include "rlx/errors.hpp"

#include <cmath>
#include <string>

namespace rlx {

TabularMDP make_riverswim(const RiverSwimParams& params) {
    const double total = params.p_right + params.p_stay + params.p_left;
    if (params.p_right < 0.0 || params.p_stay < 0.0 || params.p_left < 0.0 ||
        std::abs(total - 1.0) > kSimplexTolerance)
        throw InputError("RiverSwim probabilities must be nonnegative and sum to 1");
    if (params.num_states < 2 || params.horizon < 1)
        throw InputError("RiverSwim needs at least 2 states and a positive horizon");
    if (!std::isfinite(params.left_reward) || !std::isfinite(params.right_reward))
        throw InputError("RiverSwim rewards must be finite");

    const int S = params.num_states;
    const int last = S - 1;
    TabularMDP mdp(S, 2, params.horizon, true);
    for (int s = 0; s < S; ++s) {
        mdp.set_deterministic(0, s, kSwimLeft, s == 0 ? 0 : s - 1);

        auto row = mdp.transition_row(0, s, kSwimRight);
        std::fill(row.begin(), row.end(), 0.0);
        if (s == 0) {
            row[1] += params.p_right;
            row[0] += params.p_stay + params.p_left;
        } else if (s == last) {
            row[last] += params.p_right + params.p_stay;
            row[last - 1] += params.p_left;
        } else {
            row[s + 1] += params.p_right;
            row[s] += params.p_stay;
            row[s - 1] += params.p_left;
        }
    }
    mdp.set_mean_reward(0, 0, kSwimLeft, params.left_reward);
    mdp.set_mean_reward(0, last, kSwimRight, params.right_reward);
    mdp.validate();
    return mdp;
}

// ---------------------------------------------------------------------------

void CoherenceParams::validate() const {
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw InputError("eps must be positive");
    if (tau < 1)
        throw InputError("tau must be at least 1");
    if (n_branches < 1)
        throw InputError("n_branches must be at least 1");
    if (horizon < 0)
        throw InputError("horizon must be nonnegative (0 selects the default)");
}

double horizon_step_variance(const CoherenceParams& params) { return params.eps * params.eps / params.tau; }

double state_branch_variance(const CoherenceParams& params) {
    return params.n_branches * params.eps * params.eps;
}

double inactive_penalty(const CoherenceParams&, double per_cell_std) { return 1.0 + 20.0 * per_cell_std; }

namespace {

std::vector<double> draw_normal(int count, double variance, Rng& rng) {
    std::normal_distribution<double> dist(0.0, std::sqrt(variance));
    std::vector<double> out(count);
    for (double& x : out)
        x = dist(rng);
    return out;
}

int horizon_example_length(const CoherenceParams& params) {
    const int H = params.horizon == 0 ? params.tau + 1 : params.horizon;
    if (H < params.tau + 1)
        throw InputError("horizon example needs horizon >= tau + 1 (got " + std::to_string(H) + ")");
    return H;
}

int state_example_length(const CoherenceParams& params) {
    const int H = params.horizon == 0 ? 2 : params.horizon;
    if (H < 2)
        throw InputError("state example needs horizon >= 2");
    return H;
}

void check_means(std::span<const double> means, int expected) {
    if (int(means.size()) != expected)
        throw InputError("expected " + std::to_string(expected) + " uncertain means, got " +
                         std::to_string(means.size()));
    for (double m : means)
        if (!std::isfinite(m))
            throw InputError("uncertain means must be finite");
}

} // namespace

std::vector<double> draw_horizon_means(const CoherenceParams& params, Rng& rng) {
    params.validate();
    return draw_normal(params.tau, horizon_step_variance(params), rng);
}

std::vector<double> draw_state_means(const CoherenceParams& params, Rng& rng) {
    params.validate();
    return draw_normal(params.n_branches, state_branch_variance(params), rng);
}

TabularMDP make_horizon_example(const CoherenceParams& params, std::span<const double> means) {
    params.validate();
    const int H = horizon_example_length(params);
    check_means(means, params.tau);
    const int S = kFirstUncertainState + params.tau;
    const double penalty = inactive_penalty(params, std::sqrt(horizon_step_variance(params)));

    TabularMDP mdp(S, 2, H, true);
    mdp.set_mean_reward(0, kRootState, kKnownAction, 1.0);
    mdp.set_deterministic(0, kRootState, kKnownAction, kSinkState);
    mdp.set_deterministic(0, kRootState, kUncertainAction, kFirstUncertainState);
    for (int k = 0; k < params.tau; ++k) {
        const int s = kFirstUncertainState + k;
        const int next = k + 1 < params.tau ? s + 1 : kSinkState;
        mdp.set_mean_reward(0, s, kKnownAction, means[k]);
        mdp.set_mean_reward(0, s, kUncertainAction, -penalty);
        mdp.set_deterministic(0, s, kKnownAction, next);
        mdp.set_deterministic(0, s, kUncertainAction, next);
    }
    mdp.validate();
    return mdp;
}

TabularMDP make_horizon_example(const CoherenceParams& params, Rng& rng) {
    if (!params.true_means.empty())
        return make_horizon_example(params, params.true_means);
    return make_horizon_example(params, draw_horizon_means(params, rng));
}

TabularMDP make_state_example(const CoherenceParams& params, std::span<const double> means) {
    params.validate();
    const int H = state_example_length(params);
    check_means(means, params.n_branches);
    const int N = params.n_branches;
    const int S = kFirstUncertainState + N;
    const double penalty = inactive_penalty(params, std::sqrt(state_branch_variance(params)));

    TabularMDP mdp(S, 2, H, true);
    mdp.set_mean_reward(0, kRootState, kKnownAction, 1.0);
    mdp.set_deterministic(0, kRootState, kKnownAction, kSinkState);
    auto row = mdp.transition_row(0, kRootState, kUncertainAction);
    std::fill(row.begin(), row.end(), 0.0);
    for (int i = 0; i < N; ++i)
        row[kFirstUncertainState + i] = 1.0 / N;
    for (int i = 0; i < N; ++i) {
        const int s = kFirstUncertainState + i;
        mdp.set_mean_reward(0, s, kKnownAction, means[i]);
        mdp.set_mean_reward(0, s, kUncertainAction, -penalty);
        mdp.set_deterministic(0, s, kKnownAction, kSinkState);
        mdp.set_deterministic(0, s, kUncertainAction, kSinkState);
    }
    mdp.validate();
    return mdp;
}

TabularMDP make_state_example(const CoherenceParams& params, Rng& rng) {
    if (!params.true_means.empty())
        return make_state_example(params, params.true_means);
    return make_state_example(params, draw_state_means(params, rng));
}

namespace {

/// Posterior with the structure of `skeleton` known exactly, every reward
/// known except action 0 of the uncertain states, which get Normal(0, variance).
Posterior structural_prior(const TabularMDP& skeleton, int uncertain_states, double variance,
                           bool stationary, bool uniform_root_branching) {
    const int S = skeleton.num_states();
    const int A = skeleton.num_actions();
    Posterior prior(S, A, skeleton.horizon(), stationary);
    for (int l = 0; l < prior.num_layers(); ++l) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                const auto truth = skeleton.transition(0, s, a);
                auto counts = prior.dirichlet_row(l, s, a);
                const bool branching = uniform_root_branching && s == kRootState && a == kUncertainAction;
                for (int n = 0; n < S; ++n)
                    counts[n] = truth[n] > 0.0 ? (branching ? kKnownPseudoObservations : 1.0) : 0.0;

                const bool uncertain = s >= kFirstUncertainState && s < kFirstUncertainState + uncertain_states &&
                                       a == kKnownAction;
                prior.normal_gamma_cell(l, s, a) =
                    uncertain ? NormalGammaParams::with_mean_variance(0.0, variance)
                              : NormalGammaParams::known(skeleton.mean_reward(0, s, a));
            }
        }
    }
    prior.validate();
    return prior;
}

} // namespace

Posterior horizon_example_prior(const CoherenceParams& params, bool stationary) {
    const std::vector<double> zeros(params.tau, 0.0);
    const auto skeleton = make_horizon_example(params, zeros);
    return structural_prior(skeleton, params.tau, horizon_step_variance(params), stationary, false);
}

Posterior state_example_prior(const CoherenceParams& params, bool stationary) {
    const std::vector<double> zeros(params.n_branches, 0.0);
    const auto skeleton = make_state_example(params, zeros);
    return structural_prior(skeleton, params.n_branches, state_branch_variance(params), stationary, true);
}

} // namespace rlx
