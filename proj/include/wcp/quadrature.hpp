#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

#include "wcp/errors.hpp"

namespace wcp {

// Composite trapezoid on [a,b] whose panel width is halved until two
// successive estimates differ by less than `tol` (plus a relative term of
// the same size). Evaluations are reused across refinements.
template <typename F>
double trapezoid_refine(F&& f, double a, double b, double tol = 1e-8,
                        int max_doublings = 22, int min_doublings = 4) {
    if (a == b) return 0.0;
    double h = b - a;
    double fa = f(a), fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb))
        throw numerical_error("trapezoid_refine: non-finite integrand at interval end");
    double estimate = 0.5 * h * (fa + fb);
    std::size_t n = 1;  // current panel count
    for (int level = 1; level <= max_doublings; ++level) {
        h *= 0.5;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double v = f(a + (2.0 * i + 1.0) * h);
            if (!std::isfinite(v))
                throw numerical_error("trapezoid_refine: non-finite integrand value");
            sum += v;
        }
        double next = 0.5 * estimate + h * sum;
        n *= 2;
        if (level >= min_doublings &&
            std::fabs(next - estimate) < tol * (1.0 + std::fabs(next))) {
            return next;
        }
        estimate = next;
    }
    return estimate;
}

namespace detail {

template <typename F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Locally adaptive Simpson rule; subdivision concentrates near integrable
// singularities, which the arc-length integrands of graph-parameterized
// level curves have at their endpoints.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-10, int max_depth = 52) {
    if (a == b) return 0.0;
    double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
        throw numerical_error("adaptive_simpson: non-finite integrand value");
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Integral of f over the whole real line through the substitution x = tan u.
template <typename F>
double integrate_real_line(F&& f, double tol = 1e-10) {
    auto g = [&](double u) {
        double c = std::cos(u);
        double x = std::tan(u);
        return f(x) / (c * c);
    };
    const double pad = 1e-9;
    return adaptive_simpson(g, -M_PI_2 + pad, M_PI_2 - pad, tol);
}

}  // namespace wcp
