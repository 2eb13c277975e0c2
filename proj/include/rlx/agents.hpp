#pragma once

#include "rlx/mdp.hpp"
#include "rlx/posterior.hpp"
#include "rlx/random.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rlx {

enum class AgentKind { psrl, ucrl2, boost, greedy };

enum class BoostMode {
    sum_of_stds,      ///< per-step standard deviations accumulate linearly
    sum_of_variances, ///< per-step variances accumulate, one square root at the end
};

struct AgentConfig {
    AgentKind kind = AgentKind::psrl;
    /// c, the degree of optimism (boost only).
    double optimism_scale = 1.0;
    BoostMode boost_mode = BoostMode::sum_of_stds;
    /// delta (ucrl2 only).
    double confidence_delta = 0.05;
    PriorConfig prior{};
    bool stationary = true;
    /// Label used in result tables; defaults to the CLI name of the kind.
    std::string name;

    /// Parses a CLI agent name: psrl, ucrl2, boost-std, boost-var, greedy.
    static AgentConfig from_name(std::string_view name);
    std::string label() const;
    /// Throws ConfigError for out-of-range parameters.
    void validate() const;
};

/// Sufficient statistics of the raw history, used by the frequentist planner.
class EmpiricalCounts {
public:
    EmpiricalCounts() = default;
    EmpiricalCounts(int num_states, int num_actions, int horizon, bool stationary);

    int num_states() const noexcept { return states_; }
    int num_actions() const noexcept { return actions_; }
    int horizon() const noexcept { return horizon_; }
    bool stationary() const noexcept { return stationary_; }
    int num_layers() const noexcept { return stationary_ ? 1 : horizon_; }
    int layer_of(int t) const noexcept { return stationary_ ? 0 : t; }

    /// Number of rewards observed in (t, s, a).
    std::int64_t visits(int t, int s, int a) const { return visits_[cell(layer_of(t), s, a)]; }
    /// Number of observed transitions out of (t, s, a).
    std::int64_t transitions(int t, int s, int a) const { return transitions_[cell(layer_of(t), s, a)]; }
    std::int64_t successor_count(int t, int s, int a, int next) const {
        return successors_[cell(layer_of(t), s, a) * states_ + next];
    }
    /// Empirical mean reward; 0 for unvisited cells.
    double mean_reward(int t, int s, int a) const;
    /// Empirical transition frequencies; uniform for unobserved cells.
    std::vector<double> transition_estimate(int t, int s, int a) const;
    /// Total number of steps observed so far.
    std::int64_t total_steps() const noexcept { return total_steps_; }

    void observe(const Observation& obs);

    /// Maximum-likelihood MDP built from the counts.
    TabularMDP empirical_mdp() const;

private:
    std::size_t cell(int layer, int s, int a) const noexcept {
        return (std::size_t(layer) * states_ + s) * actions_ + a;
    }

    int states_ = 0;
    int actions_ = 0;
    int horizon_ = 0;
    bool stationary_ = true;
    std::vector<std::int64_t> visits_;
    std::vector<std::int64_t> transitions_;
    std::vector<std::int64_t> successors_;
    std::vector<double> reward_sums_;
    std::int64_t total_steps_ = 0;
};

/// Everything an agent knows before episode L: the posterior, the raw
/// counts and the number of completed episodes.
struct AgentState {
    Posterior posterior;
    EmpiricalCounts counts;
    std::int64_t episode_index = 0;

    AgentState() = default;
    AgentState(const AgentConfig& config, int num_states, int num_actions, int horizon);
    /// Starts from an explicit prior (for example one matched to an environment).
    AgentState(Posterior prior);

    void observe(const Observation& obs);
};

/// Produces the policy for the next episode.
Policy plan(const AgentConfig& config, const AgentState& state, Rng& rng);

/// Sample an MDP from the posterior and act optimally for it.
Policy psrl_plan(const Posterior& posterior, Rng& rng);

/// Backward induction on the posterior-mean MDP.
Policy greedy_plan(const Posterior& posterior);

/**
 * Maximizes p . values over the L1 ball of `radius` around `p_hat`
 * intersected with the simplex. Mass min(radius/2, 1 - p_hat[best]) moves onto
 * the highest-value state (lowest index on ties) and is taken from the
 * lowest-value states first.
 */
std::vector<double> optimistic_transition(std::span<const double> p_hat, double radius,
                                          std::span<const double> values);

struct Ucrl2Widths {
    double reward;
    double transition;
};

/// Confidence widths for a cell visited `visits` times after `total_steps` steps.
Ucrl2Widths ucrl2_widths(int num_states, int num_actions, std::int64_t visits, std::int64_t total_steps,
                         double delta);

/// Optimistic backward induction over L1 confidence balls; Q clipped at H - t.
PlanResult ucrl2_values(const EmpiricalCounts& counts, double delta);
Policy ucrl2_plan(const EmpiricalCounts& counts, double delta);

struct BoostResult {
    /// Q-hat + bonus, its maxima and greedy policy.
    PlanResult plan;
    /// Bonus per (t, s, a).
    ActionValues bonus;
};

/// Posterior std of the mean reward in (t, s, a).
double local_uncertainty(const Posterior& posterior, int t, int s, int a);

/// Optimistic recursion on the posterior-mean MDP. Bonuses are not clipped.
BoostResult boost_values(const Posterior& posterior, double c, BoostMode mode);
Policy boost_plan(const Posterior& posterior, double c, BoostMode mode);

std::string_view to_string(AgentKind kind) noexcept;
std::string_view to_string(BoostMode mode) noexcept;

} // namespace rlx
