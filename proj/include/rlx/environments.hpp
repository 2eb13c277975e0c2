#pragma once

#include "rlx/mdp.hpp"
#include "rlx/posterior.hpp"
#include "rlx/random.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace rlx {

// ---------------------------------------------------------------------------
// RiverSwim

struct RiverSwimParams {
    int num_states = 6;
    int horizon = 20;
    double p_right = 0.3;
    double p_stay = 0.6;
    double p_left = 0.1;
    double left_reward = 0.005;
    double right_reward = 1.0;
};

inline constexpr int kSwimLeft = 0;
inline constexpr int kSwimRight = 1;

/// Stationary chain; LEFT is deterministic, RIGHT fights the current.
/// Starts in state 0.
TabularMDP make_riverswim(const RiverSwimParams& params = {});

// ---------------------------------------------------------------------------
// Coherence examples
//
// Both examples share one layout with two actions:
//   state 0      root, the only real decision
//   state 1      absorbing zero-reward sink
//   states 2...  the uncertain part (low-road chain or branch states)
// Action 0 at the root is the known arm (reward 1, then the sink). Action 1
// is the uncertain arm. Away from the root, action 0 carries the uncertain
// reward and action 1 is a known dominated copy (same successor, reward
// -inactive_penalty) so that only the root carries a decision.

inline constexpr int kRootState = 0;
inline constexpr int kSinkState = 1;
inline constexpr int kFirstUncertainState = 2;
inline constexpr int kKnownAction = 0;
inline constexpr int kUncertainAction = 1;

struct CoherenceParams {
    double eps = 1.0;
    /// Low-road length for the horizon example.
    int tau = 1;
    /// Number of successor branches for the state example.
    int n_branches = 1;
    /// 0 selects the smallest valid horizon (tau + 1, or 2 for the state example).
    int horizon = 0;
    /// Explicit uncertain means; drawn from the prior when empty.
    std::vector<double> true_means;

    void validate() const;
};

/// Prior variance of each uncertain reward: eps^2 / tau on the low road,
/// N eps^2 per branch.
double horizon_step_variance(const CoherenceParams& params);
double state_branch_variance(const CoherenceParams& params);

/// Reward of the dominated copy action away from the root (as a positive penalty).
double inactive_penalty(const CoherenceParams& params, double per_cell_std);

std::vector<double> draw_horizon_means(const CoherenceParams& params, Rng& rng);
std::vector<double> draw_state_means(const CoherenceParams& params, Rng& rng);

/// Root action 1 enters a tau-state chain paying means[k], then the sink.
TabularMDP make_horizon_example(const CoherenceParams& params, std::span<const double> means);
/// Uses params.true_means or draws them.
TabularMDP make_horizon_example(const CoherenceParams& params, Rng& rng);

/// Root action 1 moves uniformly to one of N branch states; branch i pays means[i].
TabularMDP make_state_example(const CoherenceParams& params, std::span<const double> means);
TabularMDP make_state_example(const CoherenceParams& params, Rng& rng);

/// Posterior matching the construction: known structure and known rewards,
/// Normal(0, variance) beliefs on the uncertain rewards.
Posterior horizon_example_prior(const CoherenceParams& params, bool stationary = true);
Posterior state_example_prior(const CoherenceParams& params, bool stationary = true);

// ---------------------------------------------------------------------------
// Files

/// Reads the MDP JSON container. Throws ParseError (with field path) or
/// ValidationError (naming the offending cell).
TabularMDP load_mdp(const std::filesystem::path& path);
void save_mdp(const TabularMDP& mdp, const std::filesystem::path& path);

} // namespace rlx
