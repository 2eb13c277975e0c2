#pragma once

#include "rlx/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rlx::testing {

/// Posterior (mean, precision) parameters recovered from moments of
/// prior x likelihood evaluated on a grid. Works in u = log(precision) and
/// z = (mean - mode) sqrt(precision), where both integrands are smooth and
/// decay fast, so the trapezoid rule converges quickly.
inline NormalGammaParams grid_posterior(const NormalGammaParams& prior, double reward) {
    const double tau_guess = prior.alpha / prior.beta;
    const double u_lo = std::log(tau_guess) - 30.0, u_hi = std::log(tau_guess) + 6.0;
    const int nu = 1500;
    const double du = (u_hi - u_lo) / nu;
    const double dz = 0.02;
    const double z_half = 12.0;

    auto log_density = [&](double tau, double mu) {
        const double log_tau = std::log(tau);
        const double prior_part = (prior.alpha - 0.5) * log_tau - prior.beta * tau -
                                  0.5 * prior.lambda * tau * (mu - prior.mu0) * (mu - prior.mu0);
        const double likelihood = 0.5 * log_tau - 0.5 * tau * (reward - mu) * (reward - mu);
        // Jacobian of (u, z) -> (tau, mu) is tau * tau^(-1/2)
        return prior_part + likelihood + 0.5 * log_tau;
    };

    // the conditional density of the mean is log-concave with its mode
    // between the prior mean and the observation; locate it by golden section
    auto mode_at = [&](double tau) {
        double lo = std::min(prior.mu0, reward), hi = std::max(prior.mu0, reward);
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
            const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
            if (log_density(tau, a) < log_density(tau, b))
                lo = a;
            else
                hi = b;
        }
        return 0.5 * (lo + hi);
    };

    std::vector<double> modes(nu + 1);
    double peak = -INFINITY;
    for (int i = 0; i <= nu; ++i) {
        const double tau = std::exp(u_lo + i * du);
        modes[i] = mode_at(tau);
        peak = std::max(peak, log_density(tau, modes[i]));
    }

    double m0 = 0, m_tau = 0, m_tau2 = 0, m_taumu = 0, m_taumu2 = 0;
    const int nz = int(2 * z_half / dz);
    for (int i = 0; i <= nu; ++i) {
        const double tau = std::exp(u_lo + i * du);
        const double rt = std::sqrt(tau);
        const double wu = (i == 0 || i == nu) ? 0.5 : 1.0;
        for (int j = 0; j <= nz; ++j) {
            const double z = -z_half + j * dz;
            const double mu = modes[i] + z / rt;
            const double w = wu * std::exp(log_density(tau, mu) - peak);
            m0 += w;
            m_tau += w * tau;
            m_tau2 += w * tau * tau;
            m_taumu += w * tau * mu;
            m_taumu2 += w * tau * mu * mu;
        }
    }
    m_tau /= m0;
    m_tau2 /= m0;
    m_taumu /= m0;
    m_taumu2 /= m0;
    const double var_tau = m_tau2 - m_tau * m_tau;
    NormalGammaParams out;
    out.alpha = m_tau * m_tau / var_tau;
    out.beta = m_tau / var_tau;
    out.mu0 = m_taumu / m_tau;
    out.lambda = 1.0 / (m_taumu2 - out.mu0 * out.mu0 * m_tau);
    return out;
}

} // namespace rlx::testing
