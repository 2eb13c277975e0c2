#include "rlx/mdp.hpp"

#include "rlx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rlx {

namespace {

std::string cell_name(int t, int s, int a) {
    return "(t=" + std::to_string(t) + ", s=" + std::to_string(s) + ", a=" + std::to_string(a) + ")";
}

/// Nonzero entries of every transition row of one layer, so that planning
/// costs O(nnz) instead of O(S^2 A) per period.
struct SparseLayer {
    std::vector<std::size_t> offsets; // per (s, a), into next/prob
    std::vector<int> next;
    std::vector<double> prob;
};

std::vector<SparseLayer> sparsify(const TabularMDP& mdp) {
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    std::vector<SparseLayer> layers(mdp.num_layers());
    for (int l = 0; l < mdp.num_layers(); ++l) {
        auto& layer = layers[l];
        layer.offsets.reserve(std::size_t(S) * A + 1);
        layer.offsets.push_back(0);
        // a stationary MDP has one layer; period l maps to it
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                auto row = mdp.transition(l, s, a);
                for (int n = 0; n < S; ++n) {
                    if (row[n] != 0.0) {
                        layer.next.push_back(n);
                        layer.prob.push_back(row[n]);
                    }
                }
                layer.offsets.push_back(layer.next.size());
            }
        }
    }
    return layers;
}

double expected_next(const SparseLayer& layer, std::size_t row, const std::vector<double>& values) {
    const std::size_t end = layer.offsets[row + 1];
    const int* next = layer.next.data();
    const double* prob = layer.prob.data();
    const double* v = values.data();
    double total = 0.0;
    for (std::size_t k = layer.offsets[row]; k < end; ++k)
        total += prob[k] * v[next[k]];
    return total;
}

} // namespace

TabularMDP::TabularMDP(int num_states, int num_actions, int horizon, bool stationary)
    : states_(num_states), actions_(num_actions), horizon_(horizon), stationary_(stationary) {
    if (num_states <= 0 || num_actions <= 0 || horizon <= 0)
        throw StructuralError("TabularMDP dimensions must be positive");
    const std::size_t cells = std::size_t(num_layers()) * states_ * actions_;
    rho_.assign(states_, 0.0);
    rho_[0] = 1.0;
    mean_reward_.assign(cells, 0.0);
    reward_std_.assign(cells, 0.0);
    transition_.assign(cells * states_, 0.0);
    for (int l = 0; l < num_layers(); ++l)
        for (int s = 0; s < states_; ++s)
            for (int a = 0; a < actions_; ++a)
                transition_[cell(l, s, a) * states_ + s] = 1.0;
}

void TabularMDP::set_deterministic(int layer, int s, int a, int next) {
    auto row = transition_row(layer, s, a);
    std::fill(row.begin(), row.end(), 0.0);
    row[next] = 1.0;
}

void TabularMDP::validate() const {
    if (states_ <= 0 || actions_ <= 0 || horizon_ <= 0)
        throw StructuralError("TabularMDP dimensions must be positive");
    const std::size_t cells = std::size_t(num_layers()) * states_ * actions_;
    if (rho_.size() != std::size_t(states_) || mean_reward_.size() != cells ||
        reward_std_.size() != cells || transition_.size() != cells * states_)
        throw StructuralError("TabularMDP table sizes do not match (H, S, A)");

    double rho_sum = 0.0;
    for (double p : rho_) {
        if (!std::isfinite(p) || p < 0.0)
            throw ValidationError("initial distribution has a negative or non-finite entry");
        rho_sum += p;
    }
    if (std::abs(rho_sum - 1.0) > kSimplexTolerance)
        throw ValidationError("initial distribution sums to " + std::to_string(rho_sum));

    for (int l = 0; l < num_layers(); ++l) {
        for (int s = 0; s < states_; ++s) {
            for (int a = 0; a < actions_; ++a) {
                const std::size_t c = cell(l, s, a);
                if (!std::isfinite(mean_reward_[c]))
                    throw InputError("non-finite mean reward at " + cell_name(l, s, a));
                if (!std::isfinite(reward_std_[c]) || reward_std_[c] < 0.0)
                    throw InputError("invalid reward std at " + cell_name(l, s, a));
                const double* row = transition_.data() + c * states_;
                double sum = 0.0;
                bool valid = true;
                for (int n = 0; n < states_; ++n) {
                    valid &= row[n] >= 0.0; // false for NaN
                    sum += row[n];
                }
                if (!valid || !std::isfinite(sum))
                    throw ValidationError("negative or non-finite transition probability at " +
                                          cell_name(l, s, a));
                if (std::abs(sum - 1.0) > kSimplexTolerance)
                    throw ValidationError("transition row " + cell_name(l, s, a) + " sums to " +
                                          std::to_string(sum));
            }
        }
    }
}

int argmax_lowest(std::span<const double> values) {
    int best = 0;
    for (int i = 1; i < int(values.size()); ++i)
        if (values[i] > values[best])
            best = i;
    return best;
}

PlanResult backward_induction(const TabularMDP& mdp) {
    mdp.validate();
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    const int H = mdp.horizon();
    const auto layers = sparsify(mdp);
    const auto rewards = mdp.mean_reward_table();

    PlanResult out{ActionValues(H, S, A), StateValues(H, S), Policy(H, S)};
    std::vector<double> next_v(S, 0.0);
    for (int t = H - 1; t >= 0; --t) {
        const auto& layer = layers[mdp.layer_of(t)];
        const double* r = rewards.data() + std::size_t(mdp.layer_of(t)) * S * A;
        for (int s = 0; s < S; ++s) {
            const std::size_t base = std::size_t(s) * A;
            int best = 0;
            double best_q = 0.0;
            for (int a = 0; a < A; ++a) {
                const double q = r[base + a] + expected_next(layer, base + a, next_v);
                out.q_values(t, s, a) = q;
                if (a == 0 || q > best_q) {
                    best = a;
                    best_q = q;
                }
            }
            out.policy(t, s) = best;
            out.v_values(t, s) = best_q;
        }
        auto row = out.v_values.row(t);
        std::copy(row.begin(), row.end(), next_v.begin());
    }
    return out;
}

void check_policy(const TabularMDP& mdp, const Policy& policy) {
    if (policy.horizon() != mdp.horizon() || policy.num_states() != mdp.num_states())
        throw StructuralError("policy dimensions do not match the MDP");
    for (int t = 0; t < policy.horizon(); ++t)
        for (int s = 0; s < policy.num_states(); ++s)
            if (policy(t, s) < 0 || policy(t, s) >= mdp.num_actions())
                throw InputError("policy action out of range at (t=" + std::to_string(t) +
                                 ", s=" + std::to_string(s) + ")");
}

StateValues evaluate_policy(const TabularMDP& mdp, const Policy& policy) {
    mdp.validate();
    check_policy(mdp, policy);
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    const int H = mdp.horizon();
    const auto layers = sparsify(mdp);

    StateValues v(H, S);
    std::vector<double> next_v(S, 0.0);
    for (int t = H - 1; t >= 0; --t) {
        const auto& layer = layers[mdp.layer_of(t)];
        for (int s = 0; s < S; ++s) {
            const int a = policy(t, s);
            v(t, s) = mdp.mean_reward(t, s, a) + expected_next(layer, std::size_t(s) * A + a, next_v);
        }
        auto row = v.row(t);
        next_v.assign(row.begin(), row.end());
    }
    return v;
}

namespace {

int sample_index(std::span<const double> probs, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    double cum = 0.0;
    int last_positive = 0;
    for (int i = 0; i < int(probs.size()); ++i) {
        if (probs[i] <= 0.0)
            continue;
        cum += probs[i];
        last_positive = i;
        if (u < cum)
            return i;
    }
    // rounding left u above the cumulative sum
    return last_positive;
}

} // namespace

Observation simulate_episode(const TabularMDP& mdp, const Policy& policy, Rng& rng) {
    check_policy(mdp, policy);
    const int H = mdp.horizon();
    Observation obs;
    obs.states.reserve(H);
    obs.actions.reserve(H);
    obs.rewards.reserve(H);

    std::normal_distribution<double> noise(0.0, 1.0);
    int s = sample_index(mdp.initial_distribution(), rng);
    for (int t = 0; t < H; ++t) {
        const int a = policy(t, s);
        double r = mdp.mean_reward(t, s, a);
        const double sd = mdp.reward_std(t, s, a);
        if (sd > 0.0)
            r += sd * noise(rng);
        obs.states.push_back(s);
        obs.actions.push_back(a);
        obs.rewards.push_back(r);
        s = sample_index(mdp.transition(t, s, a), rng);
    }
    return obs;
}

double expected_regret(const TabularMDP& mdp, const StateValues& optimal, const Policy& policy) {
    const auto values = evaluate_policy(mdp, policy);
    const auto rho = mdp.initial_distribution();
    double regret = 0.0;
    for (int s = 0; s < mdp.num_states(); ++s)
        if (rho[s] > 0.0)
            regret += rho[s] * (optimal(0, s) - values(0, s));
    return regret;
}

double expected_regret(const TabularMDP& mdp, const Policy& policy) {
    return expected_regret(mdp, backward_induction(mdp).v_values, policy);
}

} // namespace rlx
