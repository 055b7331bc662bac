#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wcp/errors.hpp"
#include "wcp/special.hpp"

namespace wcp {

// A probability measure on the real line described by its quantile
// function; cdf and p-th absolute moment about a point are optional extras
// some operations can exploit.
struct Measure1D {
    std::function<double(double)> quantile;          // t in (0,1)
    std::function<double(double)> cdf;               // optional
    std::function<double(double, double)> abs_moment;  // optional: (p, center) -> E|X-center|^p
    // F^{-1}(1-s) evaluated stably for tiny s; falls back to quantile(1-s).
    std::function<double(double)> quantile_upper;
    std::string label;

    bool has_cdf() const { return static_cast<bool>(cdf); }
    bool has_moment() const { return static_cast<bool>(abs_moment); }

    double upper_quantile(double s) const {
        if (quantile_upper) return quantile_upper(s);
        return quantile(1.0 - s);
    }
};

inline Measure1D normal_measure(double mean, double sd) {
    Measure1D m;
    m.quantile = [mean, sd](double t) { return mean + sd * normal_quantile(t); };
    m.cdf = [mean, sd](double x) {
        return sd > 0.0 ? normal_cdf((x - mean) / sd) : (x >= mean ? 1.0 : 0.0);
    };
    m.quantile_upper = [mean, sd](double s) { return mean - sd * normal_quantile(s); };
    m.label = "normal(" + std::to_string(mean) + "," + std::to_string(sd) + ")";
    return m;
}

inline Measure1D exponential_measure(double rate) {
    if (rate <= 0.0) throw domain_error("exponential_measure: rate must be positive");
    Measure1D m;
    m.quantile = [rate](double t) { return -std::log1p(-t) / rate; };
    m.quantile_upper = [rate](double s) { return -std::log(s) / rate; };
    m.cdf = [rate](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); };
    m.abs_moment = [rate](double p, double center) {
        if (p == 1.0 && center == 0.0) return 1.0 / rate;
        return std::numeric_limits<double>::quiet_NaN();
    };
    m.label = "exp(" + std::to_string(rate) + ")";
    return m;
}

inline Measure1D uniform_measure(double a, double b) {
    if (!(a < b)) throw domain_error("uniform_measure: need a < b");
    Measure1D m;
    m.quantile = [a, b](double t) { return a + (b - a) * t; };
    m.quantile_upper = [a, b](double s) { return b - (b - a) * s; };
    m.cdf = [a, b](double x) {
        if (x <= a) return 0.0;
        if (x >= b) return 1.0;
        return (x - a) / (b - a);
    };
    m.label = "uniform(" + std::to_string(a) + "," + std::to_string(b) + ")";
    return m;
}

// Generalized Pareto with tail index xi in [0,1) and scale sigma; xi = 0 is
// the exponential distribution.
inline Measure1D gpd_measure(double xi, double sigma) {
    if (xi < 0.0 || sigma <= 0.0) throw domain_error("gpd_measure: need xi >= 0, sigma > 0");
    Measure1D m;
    m.quantile = [xi, sigma](double t) { return gpd_quantile(t, xi, sigma); };
    m.quantile_upper = [xi, sigma](double s) { return gpd_upper_quantile(s, xi, sigma); };
    m.cdf = [xi, sigma](double y) { return gpd_cdf(y, xi, sigma); };
    m.label = "gpd(" + std::to_string(xi) + "," + std::to_string(sigma) + ")";
    return m;
}

inline Measure1D student_t_measure(double nu) {
    if (nu <= 0.0) throw domain_error("student_t_measure: nu must be positive");
    Measure1D m;
    m.quantile = [nu](double t) { return student_t_quantile(t, nu); };
    m.quantile_upper = [nu](double s) { return -student_t_quantile(s, nu); };
    m.cdf = [nu](double x) { return student_t_cdf(x, nu); };
    m.label = "t(" + std::to_string(nu) + ")";
    return m;
}

inline Measure1D point_mass_measure(double x0) {
    Measure1D m;
    m.quantile = [x0](double) { return x0; };
    m.quantile_upper = [x0](double) { return x0; };
    m.cdf = [x0](double x) { return x >= x0 ? 1.0 : 0.0; };
    m.abs_moment = [x0](double p, double center) {
        return std::pow(std::fabs(x0 - center), p);
    };
    m.label = "dirac(" + std::to_string(x0) + ")";
    return m;
}

// Gaussian measure on R^d. The covariance is symmetrized on construction;
// eigenvalues in [-1e-12, 0) are clamped to zero, anything below -1e-8 is
// rejected as non-PSD by the distance computation.
struct GaussianMeasure {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;

    GaussianMeasure(Eigen::VectorXd m, Eigen::MatrixXd cov)
        : mean(std::move(m)), covariance(std::move(cov)) {
        if (covariance.rows() != covariance.cols() || covariance.rows() != mean.size())
            throw domain_error("GaussianMeasure: dimension mismatch");
        double asym = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12)
            throw domain_error("GaussianMeasure: covariance not symmetric");
        covariance = 0.5 * (covariance + covariance.transpose());
    }

    int dim() const { return static_cast<int>(mean.size()); }
};

struct DiracMeasure {
    Eigen::VectorXd support_point;

    explicit DiracMeasure(Eigen::VectorXd s) : support_point(std::move(s)) {
        if (!support_point.allFinite())
            throw domain_error("DiracMeasure: non-finite support point");
    }

    GaussianMeasure as_gaussian() const {
        long d = support_point.size();
        return GaussianMeasure(support_point, Eigen::MatrixXd::Zero(d, d));
    }
};

}  // namespace wcp
