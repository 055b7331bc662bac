#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "wcp/errors.hpp"
#include "wcp/rng.hpp"
#include "wcp/rootfind.hpp"
#include "wcp/wasserstein.hpp"

namespace wcp {

// One side of a one-parameter family: the distance to the base model
// restricted to the parameters on one side of the base point. The distance
// increases from 0 (limit at near_bound, the base end) to c (limit at
// far_bound); either bound may be infinite.
struct FamilySide {
    double near_bound = 0.0;
    double far_bound = inf;
    std::function<double(double)> distance;
    std::function<double(double)> derivative;  // optional analytic dW/dtheta
    double c = inf;

    bool has_derivative() const { return static_cast<bool>(derivative); }
};

namespace detail {

// Maps s in (0,1) to a parameter between near_bound (s -> 0) and far_bound
// (s -> 1); infinite bounds are approached geometrically.
inline double side_point(const FamilySide& side, double s) {
    double a = side.near_bound, b = side.far_bound;
    bool a_inf = std::isinf(a), b_inf = std::isinf(b);
    if (!a_inf && !b_inf) return a + s * (b - a);
    if (!a_inf && b_inf) {
        double scale = std::fabs(a) + 1.0;
        return a + (b > 0 ? 1.0 : -1.0) * scale * s / (1.0 - s);
    }
    if (a_inf && !b_inf) {
        double scale = std::fabs(b) + 1.0;
        return b + (a > 0 ? 1.0 : -1.0) * scale * (1.0 - s) / s;
    }
    // whole-line span (used when sweeping a full domain, not a real side)
    return std::tan(M_PI * (s - 0.5));
}

inline double side_distance_checked(const FamilySide& side, double theta) {
    double w = side.distance(theta);
    if (std::isnan(w) || w < -1e-12)
        throw assumption_error("family side: distance must be nonnegative");
    return w;
}

// Grid checks for the construction assumptions: W nonnegative, strictly
// increasing away from the base point, vanishing limit at the base end,
// and bounded by c when c is finite.
inline void check_side(const FamilySide& side, int grid = 256) {
    double prev = -inf;
    double max_finite = 0.0, min_value = inf;
    for (int k = 0; k < grid; ++k) {
        double s = (k + 0.5) / grid;
        double w = side_distance_checked(side, side_point(side, s));
        min_value = std::min(min_value, w);
        if (std::isfinite(w)) max_finite = std::max(max_finite, w);
        if (w < prev - 1e-10 * (1.0 + std::fabs(prev)))
            throw assumption_error("family side: distance not monotone on grid");
        prev = w;
    }
    if (max_finite <= 1e-12)
        throw assumption_error("family side: distance vanishes identically");
    // approach the base end geometrically; the distance must keep shrinking
    double closest = min_value;
    for (double s : {1e-3, 1e-6, 1e-9, 1e-12}) {
        double w = side_distance_checked(side, side_point(side, s));
        if (w > closest * (1.0 + 1e-6) + 1e-12)
            throw assumption_error("family side: distance not decreasing toward the base point");
        closest = std::min(closest, w);
    }
    if (closest > 0.05 * max_finite)
        throw assumption_error("family side: distance does not vanish toward the base point");
    if (std::isfinite(side.c)) {
        if (max_finite > side.c * (1.0 + 1e-6) + 1e-9)
            throw assumption_error("family side: distance exceeds its supremum");
        if (max_finite < 0.8 * side.c)
            throw assumption_error("family side: distance does not approach its supremum");
    }
}

inline double truncation_factor(double eta, double c) {
    return std::isfinite(c) ? -std::expm1(-eta * c) : 1.0;
}

}  // namespace detail

// A univariate complexity-penalizing prior: an exponential law with rate
// eta on the distance to the base model (truncated to [0,c] when the
// supremum c is finite), split across the two sides of the base point with
// weights w-/w+, and mapped back to the parameter by a change of variables.
class UnivariatePrior {
  public:
    UnivariatePrior(std::optional<FamilySide> minus, std::optional<FamilySide> plus,
                    double eta_minus, double eta_plus, double theta0)
        : minus_(std::move(minus)),
          plus_(std::move(plus)),
          eta_minus_(eta_minus),
          eta_plus_(eta_plus),
          theta0_(theta0) {
        if (!minus_ && !plus_) throw domain_error("UnivariatePrior: no sides");
        if ((minus_ && eta_minus_ <= 0.0) || (plus_ && eta_plus_ <= 0.0))
            throw domain_error("UnivariatePrior: eta must be positive");
        double em = minus_ ? std::exp(-eta_minus_ * minus_->c) : 1.0;  // exp(-inf)=0
        double ep = plus_ ? std::exp(-eta_plus_ * plus_->c) : 1.0;
        double denom = 2.0 - em - ep;
        w_minus_ = minus_ ? (1.0 - em) / denom : 0.0;
        w_plus_ = plus_ ? (1.0 - ep) / denom : 0.0;
    }

    double density(double theta) const {
        double d = 0.0;
        if (minus_ && in_side(*minus_, theta)) d += w_minus_ * side_density(*minus_, eta_minus_, theta);
        if (plus_ && in_side(*plus_, theta)) d += w_plus_ * side_density(*plus_, eta_plus_, theta);
        return d;
    }

    // P(theta' <= theta) from the truncated exponential law of the distance.
    double cdf(double theta) const {
        double acc = 0.0;
        if (minus_) {
            if (below(theta, *minus_)) return 0.0;
            if (in_side(*minus_, theta)) {
                double w = detail::side_distance_checked(*minus_, theta);
                return w_minus_ * (1.0 - trunc_exp_cdf(w, eta_minus_, minus_->c));
            }
            acc += w_minus_;
        }
        if (plus_) {
            if (in_side(*plus_, theta)) {
                double w = detail::side_distance_checked(*plus_, theta);
                return acc + w_plus_ * trunc_exp_cdf(w, eta_plus_, plus_->c);
            }
            if (!below(theta, *plus_)) acc += w_plus_;
        }
        return acc;
    }

    std::vector<double> sample(Rng& rng, std::size_t n) const {
        std::vector<double> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            bool take_minus = minus_ && (!plus_ || rng.uniform() < w_minus_);
            const FamilySide& side = take_minus ? *minus_ : *plus_;
            double eta = take_minus ? eta_minus_ : eta_plus_;
            double w = sample_trunc_exp(rng, eta, side.c);
            out.push_back(invert_distance(side, w));
        }
        return out;
    }

    double theta0() const { return theta0_; }
    double w_minus() const { return w_minus_; }
    double w_plus() const { return w_plus_; }
    double eta_minus() const { return eta_minus_; }
    double eta_plus() const { return eta_plus_; }
    double c_minus() const { return minus_ ? minus_->c : 0.0; }
    double c_plus() const { return plus_ ? plus_->c : 0.0; }
    const std::optional<FamilySide>& minus_side() const { return minus_; }
    const std::optional<FamilySide>& plus_side() const { return plus_; }

    double domain_lo() const {
        if (minus_) return std::min(minus_->far_bound, minus_->near_bound);
        return std::min(plus_->far_bound, plus_->near_bound);
    }
    double domain_hi() const {
        if (plus_) return std::max(plus_->far_bound, plus_->near_bound);
        return std::max(minus_->far_bound, minus_->near_bound);
    }

  private:
    static bool in_side(const FamilySide& side, double theta) {
        double lo = std::min(side.near_bound, side.far_bound);
        double hi = std::max(side.near_bound, side.far_bound);
        return theta > lo && theta < hi;
    }

    // true when theta lies beyond the side's far end, on the minus side
    static bool below(double theta, const FamilySide& side) {
        double lo = std::min(side.near_bound, side.far_bound);
        return theta <= lo;
    }

    static double trunc_exp_cdf(double w, double eta, double c) {
        if (w <= 0.0) return 0.0;
        double t = detail::truncation_factor(eta, c);
        if (std::isfinite(c) && w >= c) return 1.0;
        return -std::expm1(-eta * w) / t;
    }

    static double sample_trunc_exp(Rng& rng, double eta, double c) {
        double u = rng.uniform();
        double t = detail::truncation_factor(eta, c);
        return -std::log1p(-u * t) / eta;
    }

    double side_density(const FamilySide& side, double eta, double theta) const {
        double w = detail::side_distance_checked(side, theta);
        if (!std::isfinite(w)) return 0.0;
        double dw;
        if (side.has_derivative()) {
            dw = side.derivative(theta);
        } else {
            // central difference, clamped into the side
            double h = 1e-6 * (std::fabs(theta) + 1.0);
            double lo = std::min(side.near_bound, side.far_bound);
            double hi = std::max(side.near_bound, side.far_bound);
            double a = std::max(theta - h, std::nextafter(lo, hi));
            double b = std::min(theta + h, std::nextafter(hi, lo));
            dw = (side.distance(b) - side.distance(a)) / (b - a);
        }
        return eta * std::exp(-eta * w) / detail::truncation_factor(eta, side.c) *
               std::fabs(dw);
    }

    double invert_distance(const FamilySide& side, double w) const {
        double s_lo = 1e-15, s_hi = 1.0 - 1e-15;
        auto value = [&](double s) {
            return detail::side_distance_checked(side, detail::side_point(side, s));
        };
        if (value(s_lo) > w) return detail::side_point(side, s_lo);
        if (value(s_hi) < w) {
            if (value(s_hi) < w - 1e-6 * (1.0 + w))
                throw numerical_error("sample: bisection bracket failure (w beyond reachable range)");
            return detail::side_point(side, s_hi);
        }
        for (int i = 0; i < 120; ++i) {
            double mid = 0.5 * (s_lo + s_hi);
            if (value(mid) < w)
                s_lo = mid;
            else
                s_hi = mid;
        }
        return detail::side_point(side, 0.5 * (s_lo + s_hi));
    }

    std::optional<FamilySide> minus_, plus_;
    double eta_minus_, eta_plus_;
    double theta0_;
    double w_minus_ = 0.0, w_plus_ = 0.0;
};

// Builds the prior for a two-sided family after running the construction
// assumption checks on each provided side.
inline UnivariatePrior build_prior(std::optional<FamilySide> minus,
                                   std::optional<FamilySide> plus, double eta_minus,
                                   double eta_plus, double theta0) {
    if ((minus && eta_minus <= 0.0) || (plus && eta_plus <= 0.0))
        throw domain_error("build_prior: eta must be positive");
    if (minus) detail::check_side(*minus);
    if (plus) detail::check_side(*plus);
    return UnivariatePrior(std::move(minus), std::move(plus), eta_minus, eta_plus, theta0);
}

// One-sided overload; the side's location relative to the base point is
// read off its bounds.
inline UnivariatePrior build_prior(FamilySide side, double eta) {
    double theta0 = side.near_bound;
    bool is_minus = side.far_bound < side.near_bound;
    std::optional<FamilySide> minus, plus;
    if (is_minus)
        minus = std::move(side);
    else
        plus = std::move(side);
    return build_prior(std::move(minus), std::move(plus), eta, eta, theta0);
}

// Splits a distance map at its base point into family sides.
inline std::pair<std::optional<FamilySide>, std::optional<FamilySide>> split_sides(
    const DistanceMap1D& dm) {
    std::optional<FamilySide> minus, plus;
    if (dm.domain_lo < dm.base_point) {
        FamilySide s;
        s.near_bound = dm.base_point;
        s.far_bound = dm.domain_lo;
        s.distance = dm.eval;
        s.derivative = dm.derivative;
        s.c = dm.supremum;
        minus = std::move(s);
    }
    if (dm.domain_hi > dm.base_point) {
        FamilySide s;
        s.near_bound = dm.base_point;
        s.far_bound = dm.domain_hi;
        s.distance = dm.eval;
        s.derivative = dm.derivative;
        s.c = dm.supremum;
        plus = std::move(s);
    }
    return {std::move(minus), std::move(plus)};
}

// --- closed-form catalog ---------------------------------------------------

// Prior for the precision of a centered Gaussian against the point-mass
// base model: density eta/2 tau^{-3/2} exp(-eta tau^{-1/2}).
inline UnivariatePrior gaussian_precision_prior(double eta) {
    auto [minus, plus] = split_sides(gaussian_precision_distance_map());
    return build_prior(std::move(minus), std::move(plus), eta, eta, inf);
}

// Prior for the standard deviation: Exp(eta).
inline UnivariatePrior gaussian_sd_prior(double eta) {
    auto [minus, plus] = split_sides(gaussian_sd_distance_map());
    return build_prior(std::move(minus), std::move(plus), eta, eta, 0.0);
}

// Two-sided prior for the mean of a Gaussian with fixed variance:
// the Laplace-type density with per-side rates.
inline UnivariatePrior gaussian_mean_prior(double eta_minus, double eta_plus) {
    auto [minus, plus] = split_sides(gaussian_mean_distance_map());
    return build_prior(std::move(minus), std::move(plus), eta_minus, eta_plus, 0.0);
}

// Prior for the lag-one correlation of a stationary AR(1) path of length n
// with marginal variance sigma^2, shrinking toward the constant process
// (phi = 1). The distance supremum is finite, so the exponential law is
// truncated.
inline UnivariatePrior ar1_phi_prior(double eta, int n, double sigma) {
    auto [minus, plus] = split_sides(ar1_distance_map(n, sigma));
    return build_prior(std::move(minus), std::move(plus), eta, eta, 1.0);
}

// Prior for the GPD tail index on (0,1): eta/(1-xi)^2 exp(-eta xi/(1-xi)).
inline UnivariatePrior gpd_tail_prior(double eta) {
    auto [minus, plus] = split_sides(gpd_tail_distance_map());
    return build_prior(std::move(minus), std::move(plus), eta, eta, 0.0);
}

// --- reparameterization ------------------------------------------------------

// Density of phi = g(theta) for an invertible differentiable map with
// nonvanishing derivative; the inverse is recovered by bisection.
inline std::function<double(double)> reparameterize(const UnivariatePrior& prior,
                                                    std::function<double(double)> g,
                                                    std::function<double(double)> g_prime) {
    // grid check for a vanishing derivative inside the domain
    FamilySide span;  // reuse the side-point mapping over the full domain
    span.near_bound = prior.domain_lo();
    span.far_bound = prior.domain_hi();
    double lo_inner = inf, hi_inner = -inf;
    bool increasing = true, decreasing = true;
    double prev = 0.0;
    for (int k = 0; k < 256; ++k) {
        double s = (k + 0.5) / 256.0;
        double theta = detail::side_point(span, s);
        double gp = g_prime(theta);
        if (gp == 0.0 || !std::isfinite(gp))
            throw domain_error("reparameterize: derivative vanishes on grid");
        double val = g(theta);
        if (k > 0) {
            increasing = increasing && val >= prev;
            decreasing = decreasing && val <= prev;
        }
        prev = val;
        lo_inner = std::min(lo_inner, val);
        hi_inner = std::max(hi_inner, val);
    }
    if (!increasing && !decreasing)
        throw domain_error("reparameterize: map not monotone on grid");

    auto inverse = [span, g, increasing](double phi) {
        double s_lo = 1e-15, s_hi = 1.0 - 1e-15;
        auto val = [&](double s) {
            double v = g(detail::side_point(span, s));
            return increasing ? v : -v;
        };
        double target = increasing ? phi : -phi;
        if (val(s_lo) > target || val(s_hi) < target)
            throw numerical_error("reparameterize: value outside the mapped domain");
        for (int i = 0; i < 120; ++i) {
            double mid = 0.5 * (s_lo + s_hi);
            if (val(mid) < target)
                s_lo = mid;
            else
                s_hi = mid;
        }
        return detail::side_point(span, 0.5 * (s_lo + s_hi));
    };

    return [prior, inverse, g_prime](double phi) {
        double theta = inverse(phi);
        return prior.density(theta) / std::fabs(g_prime(theta));
    };
}

}  // namespace wcp
