#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "wcp/errors.hpp"
#include "wcp/measures.hpp"
#include "wcp/quadrature.hpp"

namespace wcp {

// Controls the quantile-integral approximation. The core is a composite
// trapezoid on [tail_cut, 1-tail_cut] whose panel width is halved until
// successive estimates differ by less than tol; the pieces beyond
// tail_split are integrated in log-stretched coordinates so power-law
// quantile growth is resolved. Tail handling: unless extend_tails is
// disabled, the remaining mass on (tail_floor, tail_cut) and its mirror is
// integrated the same way instead of being dropped, which matters for
// heavy-tailed quantiles.
struct QuadratureConfig {
    double tail_cut = 1e-7;
    double tol = 1e-8;
    int max_doublings = 22;
    double tail_split = 0.1;
    bool extend_tails = true;
    double tail_floor = 1e-300;
};

namespace detail {

// Integrates glow(t) over the lower part and gup(s) over the upper part
// (s = 1-t), each tail in log coordinates so the integrand's power-law
// growth turns into exponential decay.
template <typename GL, typename GU>
double quantile_piece_integrals(GL&& glow, GU&& gup, const QuadratureConfig& cfg) {
    const double q = cfg.tail_cut;
    const double s = cfg.tail_split;
    const double piece_tol = cfg.tol / 5.0;
    auto log_piece = [&](auto& g, double lo, double hi) {
        return trapezoid_refine(
            [&](double u) { double t = std::exp(u); return g(t) * t; },
            std::log(lo), std::log(hi), piece_tol, cfg.max_doublings);
    };
    double total = 0.0;
    total += log_piece(glow, q, s);
    total += trapezoid_refine(glow, s, 1.0 - s, piece_tol, cfg.max_doublings);
    total += log_piece(gup, q, s);
    if (cfg.extend_tails && cfg.tail_floor < q) {
        // Walk the tail down in decades, adaptive in log coordinates; stop
        // once a stage contributes nothing at the requested tolerance.
        auto deep = [&](auto& g) {
            double hi = q;
            double acc = 0.0;
            while (hi > cfg.tail_floor * 1.0000001) {
                double lo = std::max(hi * 1e-40, cfg.tail_floor);
                double piece = adaptive_simpson(
                    [&](double u) { double t = std::exp(u); return g(t) * t; },
                    std::log(lo), std::log(hi), piece_tol * 0.1);
                acc += piece;
                if (std::fabs(piece) < piece_tol * 0.01) break;
                hi = lo;
            }
            return acc;
        };
        total += deep(glow);
        total += deep(gup);
    }
    return total;
}

}  // namespace detail

// Wasserstein-p distance between measures on R via the quantile formula
// W_p^p = int_0^1 |F_mu^{-1}(t) - F_nu^{-1}(t)|^p dt.
inline double wp_quantile_1d(const Measure1D& mu, const Measure1D& nu, double p,
                             const QuadratureConfig& cfg = {}) {
    if (p < 1.0) throw domain_error("wp_quantile_1d: order p must be >= 1");
    auto check = [](double d) {
        if (!std::isfinite(d))
            throw numerical_error("wp_quantile_1d: divergent integrand (non-finite quantile)");
        return d;
    };
    auto glow = [&](double t) {
        return std::pow(std::fabs(check(mu.quantile(t) - nu.quantile(t))), p);
    };
    auto gup = [&](double s) {
        return std::pow(std::fabs(check(mu.upper_quantile(s) - nu.upper_quantile(s))), p);
    };
    double ip = detail::quantile_piece_integrals(glow, gup, cfg);
    return std::pow(std::max(ip, 0.0), 1.0 / p);
}

// Wasserstein-1 via the cdf formula, int_R |F_mu - F_nu| dx.
inline double w1_cdf_1d(const Measure1D& mu, const Measure1D& nu,
                        const QuadratureConfig& cfg = {}) {
    if (!mu.has_cdf() || !nu.has_cdf())
        throw unsupported_error("w1_cdf_1d: both measures need a cdf");
    const double q = 1e-9;
    double lo = std::min(mu.quantile(q), nu.quantile(q));
    double hi = std::max(mu.quantile(1.0 - q), nu.quantile(1.0 - q));
    auto g = [&](double x) { return std::fabs(mu.cdf(x) - nu.cdf(x)); };
    return adaptive_simpson(g, lo, hi, cfg.tol * 0.1);
}

// Squared 2-Wasserstein distance between Gaussian measures:
// ||m1-m2||^2 + tr(S1) + tr(S2) - 2 tr((S1^{1/2} S2 S1^{1/2})^{1/2}).
// Matrix square roots via symmetric eigendecomposition, eigenvalues clamped
// at zero; anything below -1e-8 is rejected.
inline double w2_gaussian(const GaussianMeasure& mu, const GaussianMeasure& nu) {
    if (mu.dim() != nu.dim()) throw domain_error("w2_gaussian: dimension mismatch");

    // Eigenvalues below the eigensolver's noise floor (relative to the
    // largest one) are zeroed before the square root; without this, O(eps)
    // noise in a zero eigenvalue turns into O(sqrt(eps)) in the root.
    auto clamp_spectrum = [](Eigen::VectorXd ev) {
        double floor_val = 1e-14 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
        for (auto& v : ev) v = (v < floor_val) ? 0.0 : v;
        return ev;
    };
    auto sqrt_psd = [&](const Eigen::MatrixXd& s) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
        if (es.eigenvalues().minCoeff() < -1e-8)
            throw domain_error("w2_gaussian: covariance not PSD");
        Eigen::VectorXd root = clamp_spectrum(es.eigenvalues()).cwiseSqrt();
        return Eigen::MatrixXd(es.eigenvectors() * root.asDiagonal() *
                               es.eigenvectors().transpose());
    };

    Eigen::MatrixXd r1 = sqrt_psd(mu.covariance);
    Eigen::MatrixXd inner = r1 * nu.covariance * r1;
    inner = 0.5 * (inner + inner.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inner);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw domain_error("w2_gaussian: covariance not PSD");
    double cross = clamp_spectrum(es.eigenvalues()).cwiseSqrt().sum();

    double w2 = (mu.mean - nu.mean).squaredNorm() + mu.covariance.trace() +
                nu.covariance.trace() - 2.0 * cross;
    return std::sqrt(std::max(w2, 0.0));
}

// W_p between a point mass and a 1D measure: the p-th root of E|X - s|^p.
inline double wp_dirac(const DiracMeasure& s, const Measure1D& mu, double p,
                       const QuadratureConfig& cfg = {}) {
    if (p < 1.0) throw domain_error("wp_dirac: order p must be >= 1");
    if (s.support_point.size() != 1)
        throw domain_error("wp_dirac: measure catalog is univariate");
    double s0 = s.support_point[0];
    if (mu.has_moment()) {
        double m = mu.abs_moment(p, s0);
        if (std::isfinite(m)) return std::pow(m, 1.0 / p);
        if (std::isnan(m)) {
            // moment not available in closed form; fall through to quadrature
        } else {
            throw numerical_error("wp_dirac: infinite moment");
        }
    }
    return wp_quantile_1d(point_mass_measure(s0), mu, p, cfg);
}

inline double wp_dirac(const DiracMeasure& s, const GaussianMeasure& mu) {
    if (s.support_point.size() != mu.dim()) throw domain_error("wp_dirac: dimension mismatch");
    double w2 = (mu.mean - s.support_point).squaredNorm() + mu.covariance.trace();
    return std::sqrt(std::max(w2, 0.0));
}

namespace detail {

// q(phi) = n + sum_{j=1}^{n-1} 2(n-j) phi^j, the exact polynomial with
// (1-phi) q(phi) = n(1-phi^2) - 2 phi(1-phi^n). The squared distance is
// 2 sigma^2 (n - sqrt(q)). Both factorized forms below keep the evaluation
// exact at the interval ends, where the raw expressions cancel:
//   n^2 - q(phi) = (1-phi) r(phi),  r_j = n^2 - n - 2jn + j(j+1)
//   q(phi)       = (1+phi) s(phi)   for even n (q(-1) = 0 there)
inline double ar1_q_poly(double phi, int n) {
    if (n % 2 == 0) {
        // coefficients s_j = b_j - s_{j-1} with b_0 = n, b_j = 2(n-j)
        double s_prev = n;
        double acc = s_prev;
        double pw = 1.0;
        for (int j = 1; j <= n - 2; ++j) {
            s_prev = 2.0 * (n - j) - s_prev;
            pw *= phi;
            acc += s_prev * pw;
        }
        return (1.0 + phi) * acc;
    }
    double acc = 2.0;
    for (int j = n - 2; j >= 1; --j) acc = acc * phi + 2.0 * (n - j);
    return acc * phi + n;
}

inline double ar1_q_poly_deriv(double phi, int n) {
    if (n < 2) return 0.0;
    double acc = 2.0 * (n - 1);  // coefficient of phi^{n-1} times its exponent
    for (int j = n - 2; j >= 1; --j) acc = acc * phi + 2.0 * (n - j) * j;
    return acc;
}

// (n^2 - q(phi)) / (1 - phi), exact by synthetic division.
inline double ar1_r_poly(double phi, int n) {
    double acc = 2.0;  // r_{n-2} = 2
    for (int j = n - 3; j >= 0; --j) {
        double rj = static_cast<double>(n) * n - n - 2.0 * j * n + static_cast<double>(j) * (j + 1);
        acc = acc * phi + rj;
    }
    return acc;
}

}  // namespace detail

// Supremum of the AR(1) distance over phi in [-1,1): attained at phi = -1.
inline double ar1_supremum(int n, double sigma) {
    double corr = std::sqrt(2.0) * std::sqrt(1.0 - ((n % 2 == 0) ? 1.0 : -1.0));
    return sigma * std::sqrt(2.0 * n - corr);
}

// 2-Wasserstein distance between a stationary AR(1) path of length n with
// lag-one correlation phi and the constant-in-time base process (phi = 1),
// both with marginal variance sigma^2.
inline double w2_ar1(double phi, int n, double sigma) {
    if (n < 2) throw domain_error("w2_ar1: need n >= 2");
    if (sigma <= 0.0) throw domain_error("w2_ar1: sigma must be positive");
    if (phi < -1.0 || phi > 1.0) throw domain_error("w2_ar1: phi outside [-1,1]");
    if (phi == 1.0) return 0.0;  // base model
    double q = std::max(detail::ar1_q_poly(phi, n), 0.0);
    // n - sqrt(q) = (n^2 - q) / (n + sqrt(q)) = (1-phi) r(phi) / (n + sqrt(q))
    double inner = (1.0 - phi) * detail::ar1_r_poly(phi, n) / (n + std::sqrt(q));
    return sigma * std::sqrt(2.0 * std::max(inner, 0.0));
}

// d/dphi of w2_ar1; negative on [-1,1) and unbounded at the base model.
inline double w2_ar1_deriv(double phi, int n, double sigma) {
    double q = std::max(detail::ar1_q_poly(phi, n), 1e-300);
    double inner = std::max(
        (1.0 - phi) * detail::ar1_r_poly(phi, n) / (n + std::sqrt(q)), 1e-300);
    return -sigma * detail::ar1_q_poly_deriv(phi, n) /
           (2.0 * std::sqrt(2.0) * std::sqrt(q) * std::sqrt(inner));
}

// W_1 distance between GPD(xi, 1) and the exponential base (xi = 0):
// xi/(1-xi).
inline double w1_gpd_tail(double xi) {
    if (xi < 0.0 || xi >= 1.0) throw domain_error("w1_gpd_tail: xi outside [0,1)");
    return xi / (1.0 - xi);
}

inline double w1_gpd_tail_deriv(double xi) {
    double d = 1.0 - xi;
    return 1.0 / (d * d);
}

// W_2 between a Student-t distribution with xi = 1/nu and the standard
// normal. Finite only for xi < 1/2 (finite second moment).
inline double w2_t_distribution(double xi, const QuadratureConfig& cfg = {}) {
    if (xi < 0.0) throw domain_error("w2_t_distribution: xi must be >= 0");
    if (xi >= 0.5) throw numerical_error("w2_t_distribution: infinite distance for xi >= 1/2");
    if (xi == 0.0) return 0.0;
    return wp_quantile_1d(student_t_measure(1.0 / xi), normal_measure(0.0, 1.0), 2.0, cfg);
}

// A parameter-to-distance map for a one-parameter family: the distance to a
// fixed base model as a function of the parameter, with the domain, the base
// point, the order, and the supremum over the domain.
struct DistanceMap1D {
    double domain_lo = 0.0;
    double domain_hi = inf;
    double base_point = 0.0;  // may coincide with an endpoint (possibly infinite)
    double order = 2.0;
    std::function<double(double)> eval;
    std::function<double(double)> derivative;  // optional analytic dW/dtheta
    double supremum = inf;                     // c, possibly infinite

    bool has_derivative() const { return static_cast<bool>(derivative); }
};

inline DistanceMap1D gaussian_sd_distance_map() {
    DistanceMap1D dm;
    dm.domain_lo = 0.0;
    dm.domain_hi = inf;
    dm.base_point = 0.0;
    dm.eval = [](double s) { return s; };
    dm.derivative = [](double) { return 1.0; };
    dm.supremum = inf;
    return dm;
}

inline DistanceMap1D gaussian_precision_distance_map() {
    DistanceMap1D dm;
    dm.domain_lo = 0.0;
    dm.domain_hi = inf;
    dm.base_point = inf;  // base model is the point mass (infinite precision)
    dm.eval = [](double tau) { return 1.0 / std::sqrt(tau); };
    dm.derivative = [](double tau) { return -0.5 * std::pow(tau, -1.5); };
    dm.supremum = inf;
    return dm;
}

inline DistanceMap1D gaussian_mean_distance_map() {
    DistanceMap1D dm;
    dm.domain_lo = -inf;
    dm.domain_hi = inf;
    dm.base_point = 0.0;
    dm.eval = [](double m) { return std::fabs(m); };
    dm.supremum = inf;
    return dm;
}

inline DistanceMap1D ar1_distance_map(int n, double sigma) {
    DistanceMap1D dm;
    dm.domain_lo = -1.0;
    dm.domain_hi = 1.0;
    dm.base_point = 1.0;
    dm.eval = [n, sigma](double phi) { return w2_ar1(phi, n, sigma); };
    dm.derivative = [n, sigma](double phi) { return w2_ar1_deriv(phi, n, sigma); };
    dm.supremum = ar1_supremum(n, sigma);
    return dm;
}

inline DistanceMap1D gpd_tail_distance_map() {
    DistanceMap1D dm;
    dm.domain_lo = 0.0;
    dm.domain_hi = 1.0;
    dm.base_point = 0.0;
    dm.order = 1.0;
    dm.eval = [](double xi) { return w1_gpd_tail(xi); };
    dm.derivative = [](double xi) { return w1_gpd_tail_deriv(xi); };
    dm.supremum = inf;
    return dm;
}

// Distance map for the t-family on xi in [0, 1/2); evaluations at or beyond
// 1/2 report an infinite distance rather than throwing, which lets cutoff
// scans treat them as "past any finite level".
inline DistanceMap1D t_distance_map(const QuadratureConfig& cfg = {}) {
    DistanceMap1D dm;
    dm.domain_lo = 0.0;
    dm.domain_hi = 0.5;
    dm.base_point = 0.0;
    dm.eval = [cfg](double xi) {
        if (xi >= 0.5) return inf;
        return w2_t_distribution(xi, cfg);
    };
    dm.supremum = inf;
    return dm;
}

}  // namespace wcp
