#pragma once

// Test-only oracles, kept independent of the library's integration paths:
// dense fixed-grid sums rather than adaptive refinement.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "wcp/measures.hpp"

namespace oracle {

// Dense midpoint-rule evaluation of (int_0^1 |F_mu^-1 - F_nu^-1|^p dt)^(1/p)
// with log-spaced tail panels.
inline double wp_quantile_dense(const wcp::Measure1D& mu, const wcp::Measure1D& nu,
                                double p, std::size_t n_mid = 400000,
                                std::size_t n_tail = 120000, double tail_floor = 1e-240) {
    auto f = [&](double t) {
        return std::pow(std::fabs(mu.quantile(t) - nu.quantile(t)), p);
    };
    auto fu = [&](double s) {
        return std::pow(std::fabs(mu.upper_quantile(s) - nu.upper_quantile(s)), p);
    };
    double acc = 0.0;
    double h = 0.8 / n_mid;
    for (std::size_t i = 0; i < n_mid; ++i) acc += f(0.1 + (i + 0.5) * h) * h;
    double ulo = std::log(tail_floor), uhi = std::log(0.1);
    double hu = (uhi - ulo) / n_tail;
    for (std::size_t i = 0; i < n_tail; ++i) {
        double u = ulo + (i + 0.5) * hu;
        double t = std::exp(u);
        acc += f(t) * t * hu;
        acc += fu(t) * t * hu;
    }
    return std::pow(acc, 1.0 / p);
}

// Dense Riemann sum of int |F_mu - F_nu| dx on [lo, hi].
inline double w1_cdf_dense(const wcp::Measure1D& mu, const wcp::Measure1D& nu, double lo,
                           double hi, std::size_t n = 2000000) {
    double h = (hi - lo) / n;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = lo + (i + 0.5) * h;
        acc += std::fabs(mu.cdf(x) - nu.cdf(x)) * h;
    }
    return acc;
}

// Simpson integration on a fixed grid (even n).
inline double simpson_fixed(const std::function<double(double)>& f, double a, double b,
                            std::size_t n = 20000) {
    if (n % 2) ++n;
    double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Integral over (0, inf) through the cubic compactification x = (u/(1-u))^3,
// whose Jacobian suppresses endpoint singularities of power-law densities.
inline double integrate_halfline(const std::function<double(double)>& f,
                                 std::size_t n = 400000) {
    double acc = 0.0;
    double h = 1.0 / n;
    for (std::size_t i = 0; i < n; ++i) {
        double u = (i + 0.5) * h;
        double r = u / (1.0 - u);
        double x = r * r * r;
        double jac = 3.0 * r * r / ((1.0 - u) * (1.0 - u));
        acc += f(x) * jac * h;
    }
    return acc;
}

// Kolmogorov-Smirnov statistic of a sample against a cdf.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    double n = static_cast<double>(sample.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double F = cdf(sample[i]);
        ks = std::max(ks, std::fabs((i + 1) / n - F));
        ks = std::max(ks, std::fabs(F - i / n));
    }
    return ks;
}

}  // namespace oracle
