#pragma once

#include "rlx/random.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace rlx {

/**
 * Episodic finite-horizon tabular MDP.
 *
 * Reward and transition tables are stored per "layer". A stationary MDP has a
 * single layer shared by every period t in [0, H); a nonstationary one has H
 * layers. Accessors taking a period `t` map it to its layer; mutators take the
 * layer directly.
 *
 * Reward noise is Gaussian with the per-cell standard deviation stored in
 * reward_std; a zero entry means the reward is deterministic.
 */
class TabularMDP {
public:
    TabularMDP() = default;
    /// Zero rewards, self-loop transitions, point-mass initial state 0.
    TabularMDP(int num_states, int num_actions, int horizon, bool stationary = true);

    int num_states() const noexcept { return states_; }
    int num_actions() const noexcept { return actions_; }
    int horizon() const noexcept { return horizon_; }
    bool stationary() const noexcept { return stationary_; }
    int num_layers() const noexcept { return stationary_ ? 1 : horizon_; }
    int layer_of(int t) const noexcept { return stationary_ ? 0 : t; }

    std::span<const double> initial_distribution() const noexcept { return rho_; }
    std::span<double> initial_distribution() noexcept { return rho_; }

    double mean_reward(int t, int s, int a) const { return mean_reward_[cell(layer_of(t), s, a)]; }
    double reward_std(int t, int s, int a) const { return reward_std_[cell(layer_of(t), s, a)]; }
    std::span<const double> transition(int t, int s, int a) const {
        return {transition_.data() + cell(layer_of(t), s, a) * states_, std::size_t(states_)};
    }

    void set_mean_reward(int layer, int s, int a, double value) { mean_reward_[cell(layer, s, a)] = value; }
    void set_reward_std(int layer, int s, int a, double value) { reward_std_[cell(layer, s, a)] = value; }
    std::span<double> transition_row(int layer, int s, int a) {
        return {transition_.data() + cell(layer, s, a) * states_, std::size_t(states_)};
    }
    /// Sets row (layer, s, a) to a point mass on `next`.
    void set_deterministic(int layer, int s, int a, int next);

    /// Raw tables, row-major [layer][s][a] and [layer][s][a][s'].
    std::span<const double> mean_reward_table() const noexcept { return mean_reward_; }
    std::span<const double> reward_std_table() const noexcept { return reward_std_; }
    std::span<const double> transition_table() const noexcept { return transition_; }

    /// Throws StructuralError, InputError (non-finite or negative std) or
    /// ValidationError (off-simplex row, naming the (t,s,a) cell).
    void validate() const;

    bool operator==(const TabularMDP&) const = default;

private:
    std::size_t cell(int layer, int s, int a) const noexcept {
        return (std::size_t(layer) * states_ + s) * actions_ + a;
    }

    int states_ = 0;
    int actions_ = 0;
    int horizon_ = 0;
    bool stationary_ = true;
    std::vector<double> rho_;
    std::vector<double> mean_reward_;
    std::vector<double> reward_std_;
    std::vector<double> transition_;
};

inline constexpr double kSimplexTolerance = 1e-9;

/// Row-major table indexed [t][s].
class StateValues {
public:
    StateValues() = default;
    StateValues(int horizon, int num_states, double fill = 0.0)
        : horizon_(horizon), states_(num_states), data_(std::size_t(horizon) * num_states, fill) {}

    int horizon() const noexcept { return horizon_; }
    int num_states() const noexcept { return states_; }
    double operator()(int t, int s) const { return data_[std::size_t(t) * states_ + s]; }
    double& operator()(int t, int s) { return data_[std::size_t(t) * states_ + s]; }
    std::span<const double> row(int t) const { return {data_.data() + std::size_t(t) * states_, std::size_t(states_)}; }

    bool operator==(const StateValues&) const = default;

private:
    int horizon_ = 0;
    int states_ = 0;
    std::vector<double> data_;
};

/// Row-major table indexed [t][s][a].
class ActionValues {
public:
    ActionValues() = default;
    ActionValues(int horizon, int num_states, int num_actions, double fill = 0.0)
        : horizon_(horizon), states_(num_states), actions_(num_actions),
          data_(std::size_t(horizon) * num_states * num_actions, fill) {}

    int horizon() const noexcept { return horizon_; }
    int num_states() const noexcept { return states_; }
    int num_actions() const noexcept { return actions_; }
    double operator()(int t, int s, int a) const { return data_[index(t, s, a)]; }
    double& operator()(int t, int s, int a) { return data_[index(t, s, a)]; }

    bool operator==(const ActionValues&) const = default;

private:
    std::size_t index(int t, int s, int a) const noexcept {
        return (std::size_t(t) * states_ + s) * actions_ + a;
    }

    int horizon_ = 0;
    int states_ = 0;
    int actions_ = 0;
    std::vector<double> data_;
};

/// Deterministic nonstationary policy: action indexed [t][s].
class Policy {
public:
    Policy() = default;
    Policy(int horizon, int num_states, int fill = 0)
        : horizon_(horizon), states_(num_states), actions_(std::size_t(horizon) * num_states, fill) {}

    int horizon() const noexcept { return horizon_; }
    int num_states() const noexcept { return states_; }
    int operator()(int t, int s) const { return actions_[std::size_t(t) * states_ + s]; }
    int& operator()(int t, int s) { return actions_[std::size_t(t) * states_ + s]; }

    bool operator==(const Policy&) const = default;

private:
    int horizon_ = 0;
    int states_ = 0;
    std::vector<int> actions_;
};

struct PlanResult {
    ActionValues q_values;
    StateValues v_values;
    Policy policy;
};

/// One episode: s_0, a_0, r_1, ..., s_{H-1}, a_{H-1}, r_H.
struct Observation {
    std::vector<int> states;
    std::vector<int> actions;
    std::vector<double> rewards;

    std::size_t length() const noexcept { return states.size(); }
    bool operator==(const Observation&) const = default;
};

/// Append-only record of completed episodes.
class History {
public:
    void append(Observation obs) { episodes_.push_back(std::move(obs)); }
    std::span<const Observation> episodes() const noexcept { return episodes_; }
    std::size_t size() const noexcept { return episodes_.size(); }

private:
    std::vector<Observation> episodes_;
};

/// Index of the largest entry; ties go to the lowest index.
int argmax_lowest(std::span<const double> values);

/// Exact finite-horizon dynamic programming with V_H = 0. The greedy policy
/// breaks ties toward the lowest action index.
PlanResult backward_induction(const TabularMDP& mdp);

/// Exact expected return of `policy` from every (t, s).
StateValues evaluate_policy(const TabularMDP& mdp, const Policy& policy);

/// Samples one episode. Consumes the stream in a fixed order: initial state,
/// then per step the reward noise (only when its std is positive) and the
/// successor.
Observation simulate_episode(const TabularMDP& mdp, const Policy& policy, Rng& rng);

/// sum_s rho(s) (V*_0(s) - V^pi_0(s)).
double expected_regret(const TabularMDP& mdp, const Policy& policy);
/// Same, reusing precomputed optimal values.
double expected_regret(const TabularMDP& mdp, const StateValues& optimal, const Policy& policy);

/// Checks that `policy` is total over (H, S) and every action is in range.
void check_policy(const TabularMDP& mdp, const Policy& policy);

} // namespace rlx
