#pragma once

#include "rlx/mdp.hpp"
#include "rlx/random.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace rlx::testing {

inline std::vector<double> random_simplex(int n, Rng& rng, bool sparse = false) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> p(n);
    double total = 0.0;
    for (auto& x : p) {
        x = (sparse && unif(rng) < 0.3) ? 0.0 : -std::log(1.0 - unif(rng));
        total += x;
    }
    if (total == 0.0) {
        p[0] = 1.0;
        return p;
    }
    for (auto& x : p)
        x /= total;
    return p;
}

inline TabularMDP random_mdp(int S, int A, int H, bool stationary, Rng& rng) {
    TabularMDP mdp(S, A, H, stationary);
    std::uniform_real_distribution<double> reward(-1.0, 2.0);
    for (int l = 0; l < mdp.num_layers(); ++l)
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) {
                mdp.set_mean_reward(l, s, a, reward(rng));
                auto p = random_simplex(S, rng, true);
                std::copy(p.begin(), p.end(), mdp.transition_row(l, s, a).begin());
            }
    auto rho = random_simplex(S, rng);
    std::copy(rho.begin(), rho.end(), mdp.initial_distribution().begin());
    return mdp;
}

/// Expected return of a policy from a start distribution, by pushing the
/// state distribution forward one period at a time.
inline double forward_return(const TabularMDP& mdp, const Policy& policy, std::vector<double> dist) {
    const int S = mdp.num_states();
    double total = 0.0;
    for (int t = 0; t < mdp.horizon(); ++t) {
        std::vector<double> next(S, 0.0);
        for (int s = 0; s < S; ++s) {
            if (dist[s] == 0.0)
                continue;
            const int a = policy(t, s);
            total += dist[s] * mdp.mean_reward(t, s, a);
            auto row = mdp.transition(t, s, a);
            for (int n = 0; n < S; ++n)
                next[n] += dist[s] * row[n];
        }
        dist = std::move(next);
    }
    return total;
}

inline std::vector<double> point_mass(int n, int i) {
    std::vector<double> p(n, 0.0);
    p[i] = 1.0;
    return p;
}

} // namespace rlx::testing
