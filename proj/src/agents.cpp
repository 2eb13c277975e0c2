#include "rlx/agents.hpp"

#include "rlx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rlx {

std::string_view to_string(AgentKind kind) noexcept {
    switch (kind) {
    case AgentKind::psrl: return "psrl";
    case AgentKind::ucrl2: return "ucrl2";
    case AgentKind::boost: return "boost";
    case AgentKind::greedy: return "greedy";
    }
    return "unknown";
}

std::string_view to_string(BoostMode mode) noexcept {
    return mode == BoostMode::sum_of_stds ? "sum_of_stds" : "sum_of_variances";
}

AgentConfig AgentConfig::from_name(std::string_view name) {
    AgentConfig cfg;
    if (name == "psrl")
        cfg.kind = AgentKind::psrl;
    else if (name == "ucrl2")
        cfg.kind = AgentKind::ucrl2;
    else if (name == "greedy")
        cfg.kind = AgentKind::greedy;
    else if (name == "boost-std") {
        cfg.kind = AgentKind::boost;
        cfg.boost_mode = BoostMode::sum_of_stds;
    } else if (name == "boost-var") {
        cfg.kind = AgentKind::boost;
        cfg.boost_mode = BoostMode::sum_of_variances;
    } else
        throw ConfigError("unknown agent '" + std::string(name) +
                          "' (expected psrl, ucrl2, boost-std, boost-var or greedy)");
    return cfg;
}

std::string AgentConfig::label() const {
    if (!name.empty())
        return name;
    if (kind == AgentKind::boost)
        return boost_mode == BoostMode::sum_of_stds ? "boost-std" : "boost-var";
    return std::string(to_string(kind));
}

void AgentConfig::validate() const {
    if (kind == AgentKind::boost && !(optimism_scale >= 0.0 && std::isfinite(optimism_scale)))
        throw ConfigError("optimism scale c must be finite and nonnegative");
    if (kind == AgentKind::ucrl2 && !(confidence_delta > 0.0 && confidence_delta < 1.0))
        throw ConfigError("confidence delta must lie in (0, 1)");
    if (!(prior.dirichlet > 0.0))
        throw ConfigError("Dirichlet prior pseudo-count must be positive");
    const auto& ng = prior.reward;
    if (!(ng.lambda > 0.0 && ng.alpha > 0.0 && ng.beta > 0.0) || !std::isfinite(ng.mu0))
        throw ConfigError("Normal-Gamma prior needs lambda, alpha, beta > 0");
}

// ---------------------------------------------------------------------------
// Empirical counts

EmpiricalCounts::EmpiricalCounts(int num_states, int num_actions, int horizon, bool stationary)
    : states_(num_states), actions_(num_actions), horizon_(horizon), stationary_(stationary) {
    const std::size_t cells = std::size_t(num_layers()) * states_ * actions_;
    visits_.assign(cells, 0);
    transitions_.assign(cells, 0);
    successors_.assign(cells * states_, 0);
    reward_sums_.assign(cells, 0.0);
}

double EmpiricalCounts::mean_reward(int t, int s, int a) const {
    const std::size_t c = cell(layer_of(t), s, a);
    return visits_[c] > 0 ? reward_sums_[c] / double(visits_[c]) : 0.0;
}

std::vector<double> EmpiricalCounts::transition_estimate(int t, int s, int a) const {
    const std::size_t c = cell(layer_of(t), s, a);
    std::vector<double> p(states_, 1.0 / states_);
    if (transitions_[c] > 0)
        for (int n = 0; n < states_; ++n)
            p[n] = double(successors_[c * states_ + n]) / double(transitions_[c]);
    return p;
}

void EmpiricalCounts::observe(const Observation& obs) {
    const std::size_t len = obs.states.size();
    if (obs.actions.size() != len || obs.rewards.size() != len || len > std::size_t(horizon_))
        throw InputError("malformed observation");
    for (std::size_t t = 0; t < len; ++t) {
        const int s = obs.states[t];
        const int a = obs.actions[t];
        if (s < 0 || s >= states_ || a < 0 || a >= actions_)
            throw InputError("observation index out of range at step " + std::to_string(t));
        const std::size_t c = cell(layer_of(int(t)), s, a);
        ++visits_[c];
        reward_sums_[c] += obs.rewards[t];
        ++total_steps_;
        if (t + 1 < len) {
            const int next = obs.states[t + 1];
            if (next < 0 || next >= states_)
                throw InputError("observation state out of range at step " + std::to_string(t + 1));
            ++transitions_[c];
            ++successors_[c * states_ + next];
        }
    }
}

TabularMDP EmpiricalCounts::empirical_mdp() const {
    TabularMDP mdp(states_, actions_, horizon_, stationary_);
    for (int l = 0; l < num_layers(); ++l) {
        for (int s = 0; s < states_; ++s) {
            for (int a = 0; a < actions_; ++a) {
                mdp.set_mean_reward(l, s, a, mean_reward(l, s, a));
                const auto p = transition_estimate(l, s, a);
                std::copy(p.begin(), p.end(), mdp.transition_row(l, s, a).begin());
            }
        }
    }
    return mdp;
}

// ---------------------------------------------------------------------------
// Agent state

AgentState::AgentState(const AgentConfig& config, int num_states, int num_actions, int horizon)
    : posterior(num_states, num_actions, horizon, config.stationary, config.prior),
      counts(num_states, num_actions, horizon, config.stationary) {}

AgentState::AgentState(Posterior prior)
    : posterior(std::move(prior)),
      counts(posterior.num_states(), posterior.num_actions(), posterior.horizon(), posterior.stationary()) {}

void AgentState::observe(const Observation& obs) {
    posterior.observe(obs);
    counts.observe(obs);
    ++episode_index;
}

// ---------------------------------------------------------------------------
// Planners

Policy psrl_plan(const Posterior& posterior, Rng& rng) {
    return backward_induction(sample_mdp(posterior, rng)).policy;
}

Policy greedy_plan(const Posterior& posterior) { return backward_induction(mean_mdp(posterior)).policy; }

namespace {

std::vector<double> optimistic_transition_sorted(std::span<const double> p_hat, double radius,
                                                 std::span<const int> ascending, int best) {
    std::vector<double> p(p_hat.begin(), p_hat.end());
    const double add = std::min(radius / 2.0, 1.0 - p[best]);
    if (add <= 0.0)
        return p;
    p[best] += add;
    double remaining = add;
    for (int i : ascending) {
        if (i == best)
            continue;
        const double take = std::min(p[i], remaining);
        p[i] -= take;
        remaining -= take;
        if (remaining <= 0.0)
            break;
    }
    return p;
}

std::vector<int> ascending_order(std::span<const double> values) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return values[i] < values[j]; });
    return order;
}

} // namespace

std::vector<double> optimistic_transition(std::span<const double> p_hat, double radius,
                                          std::span<const double> values) {
    if (p_hat.size() != values.size() || p_hat.empty())
        throw StructuralError("optimistic_transition: size mismatch");
    if (!(radius >= 0.0))
        throw InputError("optimistic_transition: radius must be nonnegative");
    const auto order = ascending_order(values);
    return optimistic_transition_sorted(p_hat, radius, order, argmax_lowest(values));
}

Ucrl2Widths ucrl2_widths(int num_states, int num_actions, std::int64_t visits, std::int64_t total_steps,
                         double delta) {
    const double n = double(std::max<std::int64_t>(1, visits));
    const double m = double(std::max<std::int64_t>(1, total_steps));
    const double S = num_states;
    const double A = num_actions;
    return {std::sqrt(7.0 * std::log(2.0 * S * A * m / delta) / (2.0 * n)),
            std::sqrt(14.0 * S * std::log(2.0 * A * m / delta) / n)};
}

PlanResult ucrl2_values(const EmpiricalCounts& counts, double delta) {
    const int S = counts.num_states();
    const int A = counts.num_actions();
    const int H = counts.horizon();
    PlanResult out{ActionValues(H, S, A), StateValues(H, S), Policy(H, S)};
    std::vector<double> next_v(S, 0.0);
    std::vector<double> q(A);
    for (int t = H - 1; t >= 0; --t) {
        const auto order = ascending_order(next_v);
        const int best = argmax_lowest(next_v);
        const double cap = double(H - t);
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                const auto w = ucrl2_widths(S, A, counts.visits(t, s, a), counts.total_steps(), delta);
                // the transition width uses transition observations, not reward observations
                const auto wp = ucrl2_widths(S, A, counts.transitions(t, s, a), counts.total_steps(), delta);
                const auto p_hat = counts.transition_estimate(t, s, a);
                const auto p = optimistic_transition_sorted(p_hat, wp.transition, order, best);
                double future = 0.0;
                for (int n = 0; n < S; ++n)
                    future += p[n] * next_v[n];
                q[a] = std::min(cap, counts.mean_reward(t, s, a) + w.reward + future);
                out.q_values(t, s, a) = q[a];
            }
            const int a_best = argmax_lowest(q);
            out.policy(t, s) = a_best;
            out.v_values(t, s) = q[a_best];
        }
        auto row = out.v_values.row(t);
        next_v.assign(row.begin(), row.end());
    }
    return out;
}

Policy ucrl2_plan(const EmpiricalCounts& counts, double delta) { return ucrl2_values(counts, delta).policy; }

double local_uncertainty(const Posterior& posterior, int t, int s, int a) {
    return posterior.normal_gamma(t, s, a).mean_std();
}

BoostResult boost_values(const Posterior& posterior, double c, BoostMode mode) {
    const TabularMDP mdp = mean_mdp(posterior);
    mdp.validate();
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    const int H = mdp.horizon();

    BoostResult out{{ActionValues(H, S, A), StateValues(H, S), Policy(H, S)}, ActionValues(H, S, A)};
    // Following the boosted greedy policy from period t+1: mean value of the
    // posterior-mean MDP, and the accumulated std (or variance) term.
    std::vector<double> next_mean(S, 0.0), next_acc(S, 0.0);
    std::vector<double> cur_mean(S), cur_acc(S);
    std::vector<double> mean_q(A), acc_q(A), boosted(A);
    for (int t = H - 1; t >= 0; --t) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                const auto row = mdp.transition(t, s, a);
                double future_mean = 0.0;
                double future_acc = 0.0;
                for (int n = 0; n < S; ++n) {
                    if (row[n] == 0.0)
                        continue;
                    future_mean += row[n] * next_mean[n];
                    // independent successor uncertainties: stds average with
                    // weight p, variances of the average carry weight p^2
                    future_acc += (mode == BoostMode::sum_of_stds ? row[n] : row[n] * row[n]) * next_acc[n];
                }
                const double sigma = local_uncertainty(posterior, t, s, a);
                mean_q[a] = mdp.mean_reward(t, s, a) + future_mean;
                double bonus;
                if (mode == BoostMode::sum_of_stds) {
                    acc_q[a] = c * sigma + future_acc;
                    bonus = acc_q[a];
                } else {
                    acc_q[a] = sigma * sigma + future_acc;
                    bonus = c * std::sqrt(acc_q[a]);
                }
                out.bonus(t, s, a) = bonus;
                boosted[a] = mean_q[a] + bonus;
                out.plan.q_values(t, s, a) = boosted[a];
            }
            const int best = argmax_lowest(boosted);
            out.plan.policy(t, s) = best;
            out.plan.v_values(t, s) = boosted[best];
            cur_mean[s] = mean_q[best];
            cur_acc[s] = acc_q[best];
        }
        std::swap(next_mean, cur_mean);
        std::swap(next_acc, cur_acc);
    }
    return out;
}

Policy boost_plan(const Posterior& posterior, double c, BoostMode mode) {
    return boost_values(posterior, c, mode).plan.policy;
}

Policy plan(const AgentConfig& config, const AgentState& state, Rng& rng) {
    switch (config.kind) {
    case AgentKind::psrl: return psrl_plan(state.posterior, rng);
    case AgentKind::ucrl2: return ucrl2_plan(state.counts, config.confidence_delta);
    case AgentKind::boost: return boost_plan(state.posterior, config.optimism_scale, config.boost_mode);
    case AgentKind::greedy: return greedy_plan(state.posterior);
    }
    throw ConfigError("unknown agent kind");
}

} // namespace rlx
