#pragma once

#include <cmath>
#include <limits>

#include "wcp/errors.hpp"

// Distribution helpers used across the library: standard normal cdf and
// quantile, regularized incomplete beta, Student-t cdf/quantile. These are
// the classical formulas; the quantile carries a Halley refinement so it is
// accurate to full double precision.

namespace wcp {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

// Inverse standard normal cdf (Acklam's rational approximation plus one
// Halley step, giving ~1e-16 relative accuracy).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw domain_error("normal_quantile: p outside (0,1)");

    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};

    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Halley refinement against erfc.
    double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

namespace detail {

// Continued fraction for the incomplete beta function (modified Lentz).
inline double betacf(double a, double b, double x) {
    const int max_iter = 300;
    const double eps = 3.0e-16;
    const double fpmin = 1.0e-300;

    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw numerical_error("incomplete beta: continued fraction did not converge");
}

}  // namespace detail

// Regularized incomplete beta I_x(a,b).
inline double incomplete_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0) throw domain_error("incomplete_beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * detail::betacf(a, b, x) / a;
    return 1.0 - bt * detail::betacf(b, a, 1.0 - x) / b;
}

inline double student_t_cdf(double x, double nu) {
    if (nu <= 0.0) throw domain_error("student_t_cdf: nu must be positive");
    if (x == 0.0) return 0.5;
    double ib = incomplete_beta(0.5 * nu, 0.5, nu / (nu + x * x));
    return x > 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

inline double student_t_pdf(double x, double nu) {
    double logc = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                  0.5 * std::log(nu * M_PI);
    return std::exp(logc - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

// Student-t quantile: bracket expansion, coarse bisection on the cdf, then
// Newton polish with the analytic pdf.
inline double student_t_quantile(double p, double nu) {
    if (!(p > 0.0 && p < 1.0)) throw domain_error("student_t_quantile: p outside (0,1)");
    if (p == 0.5) return 0.0;
    bool upper = p > 0.5;
    double tail = upper ? 1.0 - p : p;
    double lo = 0.0, hi = 1.0;
    if (tail < 1e-3) {
        // power-law tail asymptote 1-F(x) ~ c x^{-nu} gives a near-exact
        // starting bracket and avoids long geometric expansions
        double logc = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                      0.5 * std::log(nu * M_PI) + 0.5 * (nu + 1.0) * std::log(nu) -
                      std::log(nu);
        double log_x = (logc - std::log(tail)) / nu;
        if (log_x > 1.0) {
            double x_est = std::exp(std::min(log_x, 700.0));
            lo = 0.25 * x_est;
            hi = 4.0 * x_est;
            while (student_t_cdf(-lo, nu) < tail) lo *= 0.5;
            while (student_t_cdf(-hi, nu) > tail) {
                hi *= 2.0;
                if (hi > 1e300)
                    throw numerical_error("student_t_quantile: bracket expansion failed");
            }
        }
    }
    while (student_t_cdf(-hi, nu) > tail) {
        hi *= 2.0;
        if (hi > 1e300) throw numerical_error("student_t_quantile: bracket expansion failed");
    }
    for (int i = 0; i < 30 && hi - lo > 1e-8 * (1.0 + hi); ++i) {
        double mid = 0.5 * (lo + hi);
        if (student_t_cdf(-mid, nu) > tail)
            lo = mid;
        else
            hi = mid;
    }
    double x = -0.5 * (lo + hi);  // lower-tail quantile
    for (int i = 0; i < 6; ++i) {
        double err = student_t_cdf(x, nu) - tail;
        double dens = student_t_pdf(x, nu);
        if (dens <= 0.0) break;
        double step = err / dens;
        x -= step;
        if (x < -hi) x = -hi;
        if (x > -lo && -lo < 0.0) x = -lo;
        if (std::fabs(step) < 1e-15 * (1.0 + std::fabs(x))) break;
    }
    return upper ? -x : x;
}

// Generalized Pareto quantile/cdf with tail index xi >= 0 and scale sigma.
// xi = 0 is the exponential limit.
inline double gpd_quantile(double t, double xi, double sigma) {
    if (!(t > 0.0 && t < 1.0)) throw domain_error("gpd_quantile: t outside (0,1)");
    double l = std::log1p(-t);
    if (std::fabs(xi) < 1e-12) return -sigma * l;
    return sigma * std::expm1(-xi * l) / xi;
}

// F^{-1}(1-s) for the GPD, stable for tiny upper-tail probabilities s.
inline double gpd_upper_quantile(double s, double xi, double sigma) {
    if (!(s > 0.0 && s < 1.0)) throw domain_error("gpd_upper_quantile: s outside (0,1)");
    if (std::fabs(xi) < 1e-12) return -sigma * std::log(s);
    return sigma * std::expm1(-xi * std::log(s)) / xi;
}

inline double gpd_cdf(double y, double xi, double sigma) {
    if (y <= 0.0) return 0.0;
    if (std::fabs(xi) < 1e-12) return -std::expm1(-y / sigma);
    return -std::expm1(-std::log1p(xi * y / sigma) / xi);
}

}  // namespace wcp
