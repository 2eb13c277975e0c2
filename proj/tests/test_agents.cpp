#include "rlx/agents.hpp"
#include "rlx/environments.hpp"
#include "rlx/errors.hpp"
#include "simplex_oracle.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace rlx;

namespace {

std::vector<double> grid_simplex(int S, Rng& rng) {
    std::uniform_int_distribution<int> pick(0, S - 1);
    std::vector<double> p(S, 0.0);
    std::vector<int> units(S, 0);
    for (int u = 0; u < 100; ++u)
        ++units[pick(rng)];
    for (int i = 0; i < S; ++i)
        p[i] = units[i] / 100.0;
    return p;
}

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

Observation random_episode(const TabularMDP& mdp, Rng& rng) {
    Policy pi(mdp.horizon(), mdp.num_states());
    std::uniform_int_distribution<int> act(0, mdp.num_actions() - 1);
    for (int t = 0; t < mdp.horizon(); ++t)
        for (int s = 0; s < mdp.num_states(); ++s)
            pi(t, s) = act(rng);
    return simulate_episode(mdp, pi, rng);
}

} // namespace

TEST_CASE("optimistic transition matches a simplex grid search") {
    Rng rng(31);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    std::uniform_int_distribution<int> size(2, 4), radius_units(0, 60);
    for (int trial = 0; trial < 40; ++trial) {
        const int S = size(rng);
        const auto p_hat = grid_simplex(S, rng);
        const double radius = 0.02 * radius_units(rng);
        std::vector<double> v(S);
        for (auto& x : v)
            x = value(rng);
        const auto p = optimistic_transition(p_hat, radius, v);
        CAPTURE(trial);
        CHECK(std::abs(dot(p, v) - rlx::testing::grid_optimistic_value(p_hat, radius, v)) < 1e-3);
        double l1 = 0.0, total = 0.0;
        for (int i = 0; i < S; ++i) {
            CHECK(p[i] >= 0.0);
            l1 += std::abs(p[i] - p_hat[i]);
            total += p[i];
        }
        CHECK(l1 <= radius + 1e-12);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("optimistic transition edge cases") {
    const std::vector<double> p_hat{0.5, 0.5, 0.0};
    const std::vector<double> v{0.0, 1.0, 3.0};
    CHECK(optimistic_transition(p_hat, 0.0, v) == p_hat);
    // a radius of 2 reaches every point of the simplex
    CHECK(optimistic_transition(p_hat, 2.0, v) == std::vector<double>{0.0, 0.0, 1.0});
    const auto p = optimistic_transition(p_hat, 0.4, v);
    CHECK(p[2] == doctest::Approx(0.2));
    CHECK(p[0] == doctest::Approx(0.3));
    CHECK(p[1] == doctest::Approx(0.5));
    CHECK_THROWS_AS(optimistic_transition(p_hat, -1.0, v), InputError);
    CHECK_THROWS_AS(optimistic_transition(p_hat, 0.1, std::vector<double>{1.0}), StructuralError);
}

TEST_CASE("ucrl2 confidence widths") {
    const auto w = ucrl2_widths(6, 2, 10, 200, 0.05);
    CHECK(w.reward == doctest::Approx(std::sqrt(7.0 * std::log(2.0 * 6 * 2 * 200 / 0.05) / 20.0)));
    CHECK(w.transition == doctest::Approx(std::sqrt(14.0 * 6 * std::log(2.0 * 2 * 200 / 0.05) / 10.0)));
    const auto unvisited = ucrl2_widths(6, 2, 0, 0, 0.05);
    CHECK(std::isfinite(unvisited.reward));
    CHECK(unvisited.reward > w.reward);
}

TEST_CASE("ucrl2 values are optimistic and clipped") {
    const auto truth = make_riverswim();
    const auto optimal = backward_induction(truth);
    EmpiricalCounts counts(truth.num_states(), truth.num_actions(), truth.horizon(), true);
    Rng rng(3);
    for (int k = 0; k < 200; ++k) {
        counts.observe(random_episode(truth, rng));
        if (k % 50 != 49)
            continue;
        const auto values = ucrl2_values(counts, 0.05);
        for (int t = 0; t < truth.horizon(); ++t)
            for (int s = 0; s < truth.num_states(); ++s) {
                CHECK(values.v_values(t, s) >= optimal.v_values(t, s) - 1e-9);
                for (int a = 0; a < truth.num_actions(); ++a)
                    CHECK(values.q_values(t, s, a) <= truth.horizon() - t + 1e-12);
            }
    }
}

TEST_CASE("empirical counts") {
    EmpiricalCounts counts(3, 2, 3, true);
    CHECK(counts.transition_estimate(0, 1, 1) == std::vector<double>(3, 1.0 / 3));
    counts.observe({{0, 2, 2}, {1, 0, 0}, {1.0, 4.0, 2.0}});
    CHECK(counts.visits(0, 2, 0) == 2);
    CHECK(counts.transitions(0, 2, 0) == 1);
    CHECK(counts.mean_reward(0, 2, 0) == 3.0);
    CHECK(counts.transition_estimate(0, 0, 1) == std::vector<double>{0.0, 0.0, 1.0});
    CHECK(counts.total_steps() == 3);
    CHECK_NOTHROW(counts.empirical_mdp().validate());
}

TEST_CASE("boost with zero optimism is the greedy planner") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        Posterior post(4, 3, 5, trial % 2 == 0);
        const auto truth = rlx::testing::random_mdp(4, 3, 5, true, rng);
        for (int k = 0; k < 5; ++k)
            post.observe(random_episode(truth, rng));
        for (auto mode : {BoostMode::sum_of_stds, BoostMode::sum_of_variances}) {
            const auto boosted = boost_values(post, 0.0, mode);
            const auto greedy = backward_induction(mean_mdp(post));
            CHECK(boosted.plan.policy == greedy_plan(post));
            CHECK(boosted.plan.q_values == greedy.q_values);
        }
    }
}

TEST_CASE("boost bonuses grow with optimism") {
    Rng rng(42);
    Posterior post(3, 2, 4, true);
    const auto truth = rlx::testing::random_mdp(3, 2, 4, true, rng);
    for (int k = 0; k < 3; ++k)
        post.observe(random_episode(truth, rng));
    for (auto mode : {BoostMode::sum_of_stds, BoostMode::sum_of_variances}) {
        double last = -1.0;
        for (double c : {0.0, 0.5, 1.0, 2.0, 4.0}) {
            const double root = boost_values(post, c, mode).plan.v_values(0, 0);
            CHECK(root >= last);
            last = root;
        }
    }
}

TEST_CASE("boost root bonuses on the coherence examples") {
    for (double c : {0.5, 1.0, 2.0})
        for (double eps : {0.5, 1.0, 3.0})
            for (int scale : {1, 4, 9, 30}) {
                CoherenceParams params;
                params.eps = eps;
                params.tau = scale;
                params.n_branches = scale;
                const auto horizon = horizon_example_prior(params);
                const auto state = state_example_prior(params);
                const double std_form = c * eps * std::sqrt(double(scale));
                CHECK(std::abs(boost_values(horizon, c, BoostMode::sum_of_stds).bonus(0, kRootState, kUncertainAction) -
                               std_form) < 1e-12);
                CHECK(std::abs(boost_values(state, c, BoostMode::sum_of_stds).bonus(0, kRootState, kUncertainAction) -
                               std_form) < 1e-12);
                CHECK(std::abs(boost_values(horizon, c, BoostMode::sum_of_variances)
                                   .bonus(0, kRootState, kUncertainAction) -
                               c * eps) < 1e-12);
                CHECK(std::abs(
                          boost_values(state, c, BoostMode::sum_of_variances).bonus(0, kRootState, kUncertainAction) -
                          c * eps) < 1e-12);
            }
}

TEST_CASE("boost is equivariant under relabeling states") {
    Rng rng(43);
    const int S = 4;
    const std::vector<int> perm{0, 3, 1, 2};
    Posterior post(S, 2, 4, false);
    const auto truth = rlx::testing::random_mdp(S, 2, 4, true, rng);
    for (int k = 0; k < 4; ++k)
        post.observe(random_episode(truth, rng));

    Posterior relabeled(S, 2, 4, false);
    for (int l = 0; l < 4; ++l)
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < 2; ++a) {
                relabeled.normal_gamma_cell(l, perm[s], a) = post.normal_gamma(l, s, a);
                const auto from = post.dirichlet(l, s, a);
                auto to = relabeled.dirichlet_row(l, perm[s], a);
                for (int n = 0; n < S; ++n)
                    to[perm[n]] = from[n];
            }
    const auto a = boost_values(post, 1.3, BoostMode::sum_of_variances);
    const auto b = boost_values(relabeled, 1.3, BoostMode::sum_of_variances);
    for (int t = 0; t < 4; ++t)
        for (int s = 0; s < S; ++s)
            for (int act = 0; act < 2; ++act) {
                CHECK(b.bonus(t, perm[s], act) == doctest::Approx(a.bonus(t, s, act)).epsilon(1e-12));
                CHECK(b.plan.q_values(t, perm[s], act) == doctest::Approx(a.plan.q_values(t, s, act)).epsilon(1e-12));
            }
}

TEST_CASE("psrl on a concentrated posterior acts optimally") {
    const auto truth = make_riverswim();
    Posterior post(truth.num_states(), truth.num_actions(), truth.horizon(), true);
    for (int s = 0; s < truth.num_states(); ++s)
        for (int a = 0; a < truth.num_actions(); ++a) {
            auto row = post.dirichlet_row(0, s, a);
            const auto p = truth.transition(0, s, a);
            for (int n = 0; n < truth.num_states(); ++n)
                row[n] = p[n] * 1e12;
            post.normal_gamma_cell(0, s, a) = NormalGammaParams::known(truth.mean_reward(0, s, a));
        }
    Rng rng(5);
    // sampled rows differ from the truth by about 1e-6, enough to flip near-ties
    CHECK(expected_regret(truth, psrl_plan(post, rng)) < 1e-4);
    CHECK(greedy_plan(post) == backward_induction(truth).policy);
}

TEST_CASE("every agent returns a total in-range policy") {
    const auto truth = make_riverswim({4, 6});
    Rng rng(6);
    for (const char* name : {"psrl", "ucrl2", "boost-std", "boost-var", "greedy"}) {
        const auto config = AgentConfig::from_name(name);
        AgentState state(config, 4, 2, 6);
        for (int k = 0; k < 5; ++k) {
            const auto pi = plan(config, state, rng);
            CHECK_NOTHROW(check_policy(truth, pi));
            state.observe(simulate_episode(truth, pi, rng));
        }
        CHECK(state.episode_index == 5);
        CHECK(config.label() == name);
    }
}

TEST_CASE("agent configuration") {
    CHECK_THROWS_AS(AgentConfig::from_name("dqn"), ConfigError);
    auto cfg = AgentConfig::from_name("boost-var");
    CHECK(cfg.boost_mode == BoostMode::sum_of_variances);
    cfg.optimism_scale = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    auto u = AgentConfig::from_name("ucrl2");
    u.confidence_delta = 1.5;
    CHECK_THROWS_AS(u.validate(), ConfigError);
    u.name = "custom";
    CHECK(u.label() == "custom");
}
