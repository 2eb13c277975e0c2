#include "rlx/analytic.hpp"
#include "rlx/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace rlx;

namespace {

/// Phi(x) as 1/2 plus the integral of the density over [0, x], by composite
/// Simpson's rule.
double simpson_cdf(double x) {
    const int n = 20000;
    const double h = x / n;
    auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
    double sum = pdf(0.0) + pdf(x);
    for (int i = 1; i < n; ++i)
        sum += (i % 2 ? 4.0 : 2.0) * pdf(i * h);
    return 0.5 + sum * h / 3.0;
}

} // namespace

TEST_CASE("standard normal cdf matches numerical integration") {
    for (double x = -8.0; x <= 8.0; x += 0.37)
        CHECK(std::abs(standard_normal_cdf(x) - simpson_cdf(x)) < 1e-10);
    CHECK(standard_normal_cdf(0.0) == 0.5);
    for (double x = 0.05; x < 8.0; x += 0.41)
        CHECK(std::abs(standard_normal_cdf(x) + standard_normal_cdf(-x) - 1.0) < 1e-12);
}

TEST_CASE("explore probability") {
    CHECK(explore_probability(1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-14));
    CHECK(explore_probability(0.5) == doctest::Approx(0.022750131948179195).epsilon(1e-14));
    CHECK(explore_probability(2.0) == doctest::Approx(0.30853753872598688).epsilon(1e-14));
    CHECK(explore_probability(1e-3) == 0.0);
    double last = 0.0;
    for (double eps = 0.1; eps < 50.0; eps *= 1.3) {
        CHECK(explore_probability(eps) > last);
        CHECK(explore_probability(eps) < 0.5);
        last = explore_probability(eps);
    }
    CHECK_THROWS_AS(explore_probability(0.0), InputError);
    CHECK_THROWS_AS(explore_probability(-1.0), InputError);
}

TEST_CASE("decisions under each rule") {
    const auto lit = horizon_decision(0.5, 16, 1.0, DecisionMode::literature_optimism);
    CHECK(lit.boost == doctest::Approx(2.0));
    CHECK(lit.chosen_action == 2);
    CHECK(lit.explore_probability == 1.0);

    const auto coh = horizon_decision(0.5, 16, 1.0, DecisionMode::coherent_optimism);
    CHECK(coh.boost == doctest::Approx(0.5));
    CHECK(coh.chosen_action == 1);
    CHECK(coh.explore_probability == 0.0);

    const auto rnd = state_decision(0.5, 16, 1.0, DecisionMode::randomized);
    CHECK(rnd.chosen_action == 0);
    CHECK(rnd.explore_probability == explore_probability(0.5));

    // a boost of exactly 1 is a tie and keeps the known action
    CHECK(state_decision(0.5, 4, 1.0, DecisionMode::literature_optimism).chosen_action == 1);
    CHECK(state_decision(0.5, 5, 1.0, DecisionMode::literature_optimism).chosen_action == 2);
    CHECK(horizon_decision(2.0, 1, 0.75, DecisionMode::coherent_optimism).chosen_action == 2);
}

TEST_CASE("literature and coherent rules disagree exactly beyond the threshold") {
    for (auto [c, eps] : {std::pair{0.5, 1.0}, {1.0, 0.5}, {0.25, 2.0}, {0.1, 2.0}, {2.0, 1.0}}) {
        const auto region = incoherence_region(eps, c);
        for (int scale = 1; scale <= 100; ++scale) {
            for (auto decide : {&horizon_decision, &state_decision}) {
                const bool differ = decide(eps, scale, c, DecisionMode::literature_optimism).chosen_action !=
                                    decide(eps, scale, c, DecisionMode::coherent_optimism).chosen_action;
                CHECK(differ == region.disagrees_at(scale));
            }
        }
    }
    CHECK(incoherence_region(1.0, 0.5).threshold == 4.0);
    CHECK(incoherence_region(1.0, 2.0).coherent_explores);
}

TEST_CASE("monte carlo explore frequency") {
    for (auto example : {CoherenceExample::horizon, CoherenceExample::state}) {
        const double f = monte_carlo_explore_frequency(example, 1.0, 4, 20000, 3);
        CHECK(std::abs(f - explore_probability(1.0)) < 0.01);
    }
    CHECK(monte_carlo_explore_frequency(CoherenceExample::state, 2.0, 9, 3000, 8, 1) ==
          monte_carlo_explore_frequency(CoherenceExample::state, 2.0, 9, 3000, 8, 3));
}
