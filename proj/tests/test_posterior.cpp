#include "bayes_oracle.hpp"
#include "rlx/errors.hpp"
#include "rlx/posterior.hpp"

#include <doctest.h>

#include <cmath>

using namespace rlx;

namespace {

NormalGammaParams random_prior(Rng& rng) {
    std::uniform_real_distribution<double> mu(-2.0, 2.0), lambda(0.5, 5.0), alpha(1.5, 6.0), beta(0.5, 3.0);
    return {mu(rng), lambda(rng), alpha(rng), beta(rng)};
}

bool near(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

} // namespace

TEST_CASE("normal-gamma update matches numerical Bayes rule") {
    Rng rng(2024);
    std::uniform_real_distribution<double> obs(-3.0, 3.0);
    for (int i = 0; i < 5; ++i) {
        const auto prior = random_prior(rng);
        const double r = obs(rng);
        const auto closed = prior.updated(r);
        const auto grid = rlx::testing::grid_posterior(prior, r);
        CAPTURE(i);
        CHECK(near(closed.mu0, grid.mu0, 1e-6));
        CHECK(near(closed.lambda, grid.lambda, 1e-6));
        CHECK(near(closed.alpha, grid.alpha, 1e-6));
        CHECK(near(closed.beta, grid.beta, 1e-6));
    }
}

TEST_CASE("normal-gamma known-value helpers") {
    const auto known = NormalGammaParams::known(3.0);
    CHECK(known.mean_std() < 1e-15);
    const auto nv = NormalGammaParams::with_mean_variance(0.5, 4.0);
    CHECK(nv.mu0 == 0.5);
    CHECK(nv.mean_std() == doctest::Approx(2.0).epsilon(1e-12));
    const NormalGammaParams heavy{0.0, 2.0, 0.75, 3.0};
    CHECK(heavy.mean_std() == doctest::Approx(std::sqrt(3.0 / 1.5)));
}

TEST_CASE("dirichlet sample moments match the closed form") {
    Posterior post(3, 1, 1, true);
    auto row = post.dirichlet_row(0, 0, 0);
    row[0] = 0.5;
    row[1] = 2.0;
    row[2] = 4.5;
    const double total = 7.0;

    Rng rng(17);
    const int n = 100000;
    double sum[3] = {}, sum_sq[3] = {};
    for (int i = 0; i < n; ++i) {
        const auto mdp = sample_mdp(post, rng);
        const auto p = mdp.transition(0, 0, 0);
        for (int k = 0; k < 3; ++k) {
            sum[k] += p[k];
            sum_sq[k] += p[k] * p[k];
        }
    }
    for (int k = 0; k < 3; ++k) {
        const double mean = row[k] / total;
        const double var = mean * (1 - mean) / (total + 1);
        const double m = sum[k] / n;
        const double v = sum_sq[k] / n - m * m;
        CHECK(std::abs(m - mean) / mean < 0.05);
        CHECK(std::abs(v - var) / var < 0.05);
    }
}

TEST_CASE("zero pseudo-counts restrict the sampled support") {
    Posterior post(4, 1, 1, true);
    auto row = post.dirichlet_row(0, 0, 0);
    row[0] = 0.0;
    row[1] = 3.0;
    row[2] = 0.0;
    row[3] = 1.0;
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto mdp = sample_mdp(post, rng);
        const auto p = mdp.transition(0, 0, 0);
        CHECK(p[0] == 0.0);
        CHECK(p[2] == 0.0);
    }
    row[1] = 0.0;
    CHECK(sample_mdp(post, rng).transition(0, 0, 0)[3] == 1.0);
    row[3] = 0.0;
    CHECK_THROWS_AS(post.validate(), InputError);
}

TEST_CASE("sampled rewards follow the normal-gamma marginals") {
    PriorConfig prior;
    prior.reward = {1.5, 2.0, 3.0, 2.0};
    Posterior post(1, 1, 1, true, prior);
    Rng rng(5);
    const int n = 200000;
    double sum = 0, sum_sq = 0, prec_sum = 0;
    for (int i = 0; i < n; ++i) {
        const auto mdp = sample_mdp(post, rng);
        const double m = mdp.mean_reward(0, 0, 0);
        sum += m;
        sum_sq += m * m;
        prec_sum += 1.0 / (mdp.reward_std(0, 0, 0) * mdp.reward_std(0, 0, 0));
    }
    const double mean = sum / n, var = sum_sq / n - mean * mean;
    // mean marginal is Student-t: variance beta / (lambda (alpha - 1))
    const double var_exact = 2.0 / (2.0 * 2.0);
    CHECK(std::abs(mean - 1.5) < 5 * std::sqrt(var_exact / n));
    CHECK(std::abs(var - var_exact) / var_exact < 0.03);
    CHECK(std::abs(prec_sum / n - 1.5) / 1.5 < 0.01);
}

TEST_CASE("posterior updates are order independent") {
    Posterior post(3, 2, 4, false);
    Observation a{{0, 1, 2, 1}, {1, 0, 1, 1}, {0.3, -1.2, 2.0, 0.7}};
    Observation b{{2, 2, 0, 1}, {0, 1, 1, 0}, {1.1, 0.4, -0.5, 0.2}};
    const auto ab = update(update(post, a), b);
    const auto ba = update(update(post, b), a);
    for (int t = 0; t < 4; ++t)
        for (int s = 0; s < 3; ++s)
            for (int act = 0; act < 2; ++act) {
                const auto x = ab.dirichlet(t, s, act), y = ba.dirichlet(t, s, act);
                CHECK(std::equal(x.begin(), x.end(), y.begin()));
                const auto& p = ab.normal_gamma(t, s, act);
                const auto& q = ba.normal_gamma(t, s, act);
                CHECK(p.mu0 == doctest::Approx(q.mu0).epsilon(1e-12));
                CHECK(p.lambda == q.lambda);
                CHECK(p.alpha == q.alpha);
                CHECK(p.beta == doctest::Approx(q.beta).epsilon(1e-12));
            }
}

TEST_CASE("observe bumps counts along the trajectory") {
    Posterior post(3, 2, 3, true, {0.5, {}});
    post.observe({{0, 2, 1}, {1, 0, 1}, {1.0, 2.0, 3.0}});
    CHECK(post.dirichlet(0, 0, 1)[2] == 1.5);
    CHECK(post.dirichlet(0, 2, 0)[1] == 1.5);
    // no successor is observed after the last step
    CHECK(post.dirichlet(0, 1, 1)[0] == 0.5);
    CHECK(post.normal_gamma(0, 1, 1).lambda == 2.0);
    CHECK(post.normal_gamma(0, 1, 1).mu0 == doctest::Approx(1.5));
    CHECK_THROWS_AS(post.observe({{0, 5}, {0, 0}, {0.0, 0.0}}), InputError);
}

TEST_CASE("posterior concentrates on the truth") {
    Posterior post(2, 2, 2, true);
    Rng rng(9);
    std::normal_distribution<double> reward(0.7, 0.5);
    std::bernoulli_distribution move(0.25);
    for (int i = 0; i < 20000; ++i) {
        const int next = move(rng) ? 1 : 0;
        post.observe({{0, next}, {0, 1}, {reward(rng), 0.0}});
    }
    const auto mean = mean_mdp(post);
    CHECK(mean.mean_reward(0, 0, 0) == doctest::Approx(0.7).epsilon(0.01));
    CHECK(mean.transition(0, 0, 0)[1] == doctest::Approx(0.25).epsilon(0.03));
    const auto& ng = post.normal_gamma(0, 0, 0);
    CHECK(ng.alpha / ng.beta == doctest::Approx(4.0).epsilon(0.05));
    CHECK(ng.mean_std() < 0.01);
}

TEST_CASE("mean MDP is the average of sampled MDPs") {
    PriorConfig prior{0.7, {0.2, 1.0, 2.5, 1.0}};
    Posterior post(3, 2, 2, true, prior);
    post.observe({{0, 1}, {1, 0}, {0.5, -0.3}});
    const auto mean = mean_mdp(post);
    Rng rng(12);
    const int n = 50000;
    std::vector<double> avg(3, 0.0);
    double reward = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto m = sample_mdp(post, rng);
        const auto p = m.transition(0, 0, 1);
        for (int k = 0; k < 3; ++k)
            avg[k] += p[k] / n;
        reward += m.mean_reward(0, 0, 1) / n;
    }
    for (int k = 0; k < 3; ++k)
        CHECK(std::abs(avg[k] - mean.transition(0, 0, 1)[k]) < 0.01);
    CHECK(std::abs(reward - mean.mean_reward(0, 0, 1)) < 0.02);
}

TEST_CASE("sampling is reproducible from the stream") {
    Posterior post(4, 2, 3, false);
    Rng a(77), b(77);
    CHECK(sample_mdp(post, a) == sample_mdp(post, b));
    CHECK_NOTHROW(sample_mdp(post, a).validate());
}

TEST_CASE("posterior rejects invalid hyperparameters") {
    CHECK_THROWS_AS(Posterior(2, 1, 1, true, {-1.0, {}}), InputError);
    CHECK_THROWS_AS(Posterior(2, 1, 1, true, {1.0, {0.0, 0.0, 1.0, 1.0}}), InputError);
    CHECK_THROWS_AS(Posterior(0, 1, 1, true), StructuralError);
}
