#pragma once

#include <cmath>
#include <functional>

#include "wcp/errors.hpp"

namespace wcp {

// Solve f(x) = target for increasing f on [lo, hi] by bisection.
template <typename F>
double bisect_increasing(F&& f, double lo, double hi, double target,
                         double xtol = 1e-13, int max_iter = 200) {
    double flo = f(lo), fhi = f(hi);
    if (flo > target || fhi < target)
        throw numerical_error("bisect_increasing: target not bracketed");
    for (int i = 0; i < max_iter; ++i) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= xtol * (1.0 + std::fabs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

// Expand [start, start+step] geometrically until f reaches `target`
// (f increasing). Returns the bracket upper end.
template <typename F>
double expand_upper_bracket(F&& f, double start, double target, double step = 1.0,
                            double limit = 1e306) {
    double hi = start + step;
    while (f(hi) < target) {
        step *= 2.0;
        hi = start + step;
        if (hi > limit) throw numerical_error("expand_upper_bracket: target unreachable");
    }
    return hi;
}

// Golden-section maximization of a unimodal function on [a,b].
template <typename F>
double golden_section_max(F&& f, double a, double b, double xtol = 1e-6) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);  // 1/phi
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Central difference with step scaled by the magnitude of x.
template <typename F>
double central_difference(F&& f, double x, double scale = 1e-6) {
    double h = scale * (std::fabs(x) + 1.0);
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace wcp
