#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"
#include "wcp/wasserstein.hpp"

using namespace wcp;

namespace {

std::vector<Measure1D> catalog_1d() {
    return {normal_measure(0.0, 1.0), normal_measure(1.0, 2.0), exponential_measure(1.0),
            uniform_measure(0.0, 1.0), uniform_measure(0.5, 1.5), gpd_measure(0.25, 1.0),
            point_mass_measure(0.3)};
}

}  // namespace

TEST_CASE("wp_quantile_1d: catalog examples") {
    auto n01 = normal_measure(0.0, 1.0);
    CHECK(wp_quantile_1d(n01, n01, 2.0) == Catch::Approx(0.0).margin(1e-9));

    // GPD(xi,1) vs Exp(1) at p=1 equals xi/(1-xi)
    CHECK(wp_quantile_1d(gpd_measure(0.5, 1.0), exponential_measure(1.0), 1.0) ==
          Catch::Approx(1.0).epsilon(1e-7));

    // comonotone Gaussian: sqrt((m1-m2)^2 + (s1-s2)^2)
    double w = wp_quantile_1d(n01, normal_measure(1.0, 2.0), 2.0);
    CHECK(w == Catch::Approx(std::sqrt(2.0)).margin(1e-6));
    CHECK(w == Catch::Approx(oracle::wp_quantile_dense(n01, normal_measure(1.0, 2.0), 2.0))
                   .margin(1e-6));

    CHECK_THROWS_AS(wp_quantile_1d(n01, n01, 0.5), domain_error);
}

TEST_CASE("w1_cdf_1d: catalog examples and consistency with the quantile route") {
    auto u = uniform_measure(0.0, 1.0);
    CHECK(w1_cdf_1d(u, u) == Catch::Approx(0.0).margin(1e-9));
    CHECK(w1_cdf_1d(u, uniform_measure(0.5, 1.5)) == Catch::Approx(0.5).margin(1e-7));
    CHECK(oracle::w1_cdf_dense(u, uniform_measure(0.5, 1.5), -1.0, 3.0) ==
          Catch::Approx(0.5).margin(1e-6));
    CHECK(w1_cdf_1d(exponential_measure(1.0), gpd_measure(0.25, 1.0)) ==
          Catch::Approx(1.0 / 3.0).margin(1e-6));

    auto cat = catalog_1d();
    for (std::size_t i = 0; i < cat.size(); ++i) {
        for (std::size_t j = i + 1; j < cat.size(); ++j) {
            if (!cat[i].has_cdf() || !cat[j].has_cdf()) continue;
            INFO(cat[i].label << " vs " << cat[j].label);
            CHECK(w1_cdf_1d(cat[i], cat[j]) ==
                  Catch::Approx(wp_quantile_1d(cat[i], cat[j], 1.0)).margin(1e-6));
        }
    }

    Measure1D no_cdf;
    no_cdf.quantile = [](double t) { return t; };
    CHECK_THROWS_AS(w1_cdf_1d(no_cdf, u), unsupported_error);
}

TEST_CASE("w2_gaussian: closed form catalog") {
    Eigen::MatrixXd id2 = Eigen::MatrixXd::Identity(2, 2);
    GaussianMeasure std2(Eigen::VectorXd::Zero(2), id2);
    CHECK(w2_gaussian(std2, std2) == Catch::Approx(0.0).margin(1e-12));

    // point masses: Euclidean distance of the means
    Eigen::VectorXd m(2);
    m << 3.0, 4.0;
    GaussianMeasure d0(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Zero(2, 2));
    GaussianMeasure d1(m, Eigen::MatrixXd::Zero(2, 2));
    CHECK(w2_gaussian(d0, d1) == Catch::Approx(5.0).epsilon(1e-12));

    // rank-one vs identity, hand eigendecomposition gives sqrt(4 - 2 sqrt(2))
    GaussianMeasure ones(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Ones(2, 2));
    CHECK(w2_gaussian(ones, std2) ==
          Catch::Approx(std::sqrt(4.0 - 2.0 * std::sqrt(2.0))).epsilon(1e-12));
    CHECK(std::fabs(w2_gaussian(ones, std2) - w2_gaussian(std2, ones)) < 1e-9);

    CHECK_THROWS_AS(
        w2_gaussian(std2, GaussianMeasure(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3))),
        domain_error);

    Eigen::MatrixXd npsd(2, 2);
    npsd << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
    CHECK_THROWS_AS(w2_gaussian(GaussianMeasure(Eigen::VectorXd::Zero(2), npsd), std2),
                    domain_error);
}

TEST_CASE("w2_gaussian: 1d inputs match the comonotone closed form") {
    auto g1 = [](double m, double s) {
        Eigen::VectorXd mean(1);
        mean << m;
        Eigen::MatrixXd cov(1, 1);
        cov << s * s;
        return GaussianMeasure(mean, cov);
    };
    for (auto [m1, s1, m2, s2] : {std::array<double, 4>{0.0, 1.0, 1.0, 2.0},
                                  std::array<double, 4>{-0.5, 0.3, 0.7, 0.3},
                                  std::array<double, 4>{2.0, 0.0, -1.0, 1.5}}) {
        double expect = std::sqrt((m1 - m2) * (m1 - m2) + (s1 - s2) * (s1 - s2));
        CHECK(w2_gaussian(g1(m1, s1), g1(m2, s2)) == Catch::Approx(expect).margin(1e-9));
    }
}

TEST_CASE("wp_dirac: moments of the distance to the support point") {
    DiracMeasure d0((Eigen::VectorXd(1) << 0.0).finished());
    // W2(delta_0, N(0, 1/tau)) = tau^{-1/2} at tau = 4
    CHECK(wp_dirac(d0, normal_measure(0.0, 0.5), 2.0) == Catch::Approx(0.5).margin(1e-8));
    CHECK(wp_dirac(d0, point_mass_measure(0.0), 2.0) == Catch::Approx(0.0).margin(1e-12));
    CHECK(wp_dirac(d0, exponential_measure(1.0), 1.0) == Catch::Approx(1.0).margin(1e-8));
    CHECK(oracle::wp_quantile_dense(point_mass_measure(0.0), exponential_measure(1.0), 1.0) ==
          Catch::Approx(1.0).margin(1e-5));

    GaussianMeasure iso(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3) * 0.25);
    DiracMeasure d3(Eigen::VectorXd::Zero(3));
    CHECK(wp_dirac(d3, iso) == Catch::Approx(std::sqrt(0.75)).epsilon(1e-12));
}

TEST_CASE("w2_ar1: closed form, limits, supremum") {
    CHECK(w2_ar1(1.0, 10, 0.1) == 0.0);
    CHECK(w2_ar1(0.0, 2, 1.0) ==
          Catch::Approx(std::sqrt(4.0 - 2.0 * std::sqrt(2.0))).epsilon(1e-12));
    CHECK(ar1_supremum(10, 0.1) == Catch::Approx(0.1 * std::sqrt(20.0)).epsilon(1e-12));
    CHECK(ar1_supremum(5, 1.0) == Catch::Approx(std::sqrt(8.0)).epsilon(1e-12));

    // strictly decreasing in phi, bounded by c
    for (int n : {2, 5, 10}) {
        double prev = inf;
        for (int k = 0; k <= 100; ++k) {
            double phi = -1.0 + 2.0 * k / 100.0;
            double w = w2_ar1(phi, n, 0.7);
            CHECK(w <= ar1_supremum(n, 0.7) + 1e-9);
            CHECK(w < prev);
            prev = w;
        }
    }
    CHECK_THROWS_AS(w2_ar1(1.5, 10, 1.0), domain_error);
}

TEST_CASE("w2_ar1: matches w2_gaussian on explicitly assembled covariances") {
    for (int n : {2, 3, 5, 10}) {
        for (double phi : {-0.99, -0.6, 0.0, 0.4, 0.85, 0.999}) {
            double sigma = 0.8;
            Eigen::MatrixXd base = Eigen::MatrixXd::Constant(n, n, sigma * sigma);
            Eigen::MatrixXd flex(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    flex(i, j) = std::pow(phi, std::abs(i - j)) * sigma * sigma;
            GaussianMeasure mu0(Eigen::VectorXd::Zero(n), base);
            GaussianMeasure muf(Eigen::VectorXd::Zero(n), flex);
            INFO("n=" << n << " phi=" << phi);
            CHECK(w2_ar1(phi, n, sigma) == Catch::Approx(w2_gaussian(mu0, muf)).margin(1e-8));
        }
    }
}

TEST_CASE("w2_ar1: analytic derivative matches differences") {
    for (double phi : {-0.9, -0.2, 0.5, 0.9}) {
        double h = 1e-6;
        double fd = (w2_ar1(phi + h, 10, 0.3) - w2_ar1(phi - h, 10, 0.3)) / (2.0 * h);
        CHECK(w2_ar1_deriv(phi, 10, 0.3) == Catch::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("w1_gpd_tail: closed form and quadrature oracle") {
    CHECK(w1_gpd_tail(0.0) == 0.0);
    CHECK(w1_gpd_tail(0.5) == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(w1_gpd_tail(2.0 / 3.0) == Catch::Approx(2.0).epsilon(1e-12));
    CHECK(wp_quantile_1d(gpd_measure(2.0 / 3.0, 1.0), exponential_measure(1.0), 1.0) ==
          Catch::Approx(2.0).epsilon(1e-6));
    CHECK_THROWS_AS(w1_gpd_tail(1.0), domain_error);
}

TEST_CASE("w2_t_distribution: base case, cutoff stability, monotonicity") {
    CHECK(w2_t_distribution(0.0) == 0.0);
    CHECK_THROWS_AS(w2_t_distribution(0.5), numerical_error);

    // truncation-insensitivity convention: the value must agree across two
    // tail cutoffs before it is trusted
    QuadratureConfig cut6, cut7;
    cut6.tail_cut = 1e-6;
    cut7.tail_cut = 1e-7;
    double w6 = w2_t_distribution(0.1, cut6);
    double w7 = w2_t_distribution(0.1, cut7);
    CHECK(std::fabs(w6 - w7) < 1e-4);
    CHECK(w6 > 0.0);

    // reference from an independent dense-quadrature oracle
    CHECK(w2_t_distribution(0.1) == Catch::Approx(0.141502624).margin(2e-7));
    CHECK(w2_t_distribution(0.2) == Catch::Approx(0.357299614).margin(2e-7));

    QuadratureConfig loose;
    loose.tol = 1e-7;
    loose.tail_cut = 1e-6;
    double prev = 0.0;
    for (double xi = 0.05; xi < 0.46; xi += 0.05) {
        double w = w2_t_distribution(xi, loose);
        INFO("xi=" << xi);
        CHECK(w > prev);
        prev = w;
    }
}

TEST_CASE("metric axioms sampled on the catalog") {
    auto cat = catalog_1d();
    for (std::size_t i = 0; i < cat.size(); ++i) {
        INFO(cat[i].label);
        CHECK(wp_quantile_1d(cat[i], cat[i], 2.0) <= 1e-9);
        for (std::size_t j = i + 1; j < cat.size(); ++j) {
            double wij = wp_quantile_1d(cat[i], cat[j], 2.0);
            double wji = wp_quantile_1d(cat[j], cat[i], 2.0);
            CHECK(wij >= 0.0);
            CHECK(std::fabs(wij - wji) < 1e-9);
            for (std::size_t k = 0; k < cat.size(); ++k) {
                if (k == i || k == j) continue;
                double wik = wp_quantile_1d(cat[i], cat[k], 2.0);
                double wkj = wp_quantile_1d(cat[k], cat[j], 2.0);
                INFO(cat[i].label << " " << cat[j].label << " " << cat[k].label);
                CHECK(wij <= wik + wkj + 1e-6);
            }
        }
    }
}

TEST_CASE("distance maps: vanishing at the base point, bounded by the supremum") {
    auto ar1 = ar1_distance_map(10, 0.1);
    CHECK(ar1.eval(1.0 - 1e-9) < 1e-4);
    auto gpd = gpd_tail_distance_map();
    CHECK(gpd.eval(1e-10) < 1e-9);
    auto prec = gaussian_precision_distance_map();
    CHECK(prec.eval(1e12) < 1e-5);
    for (int k = 1; k < 40; ++k) {
        double phi = -1.0 + 2.0 * k / 40.0;
        CHECK(ar1.eval(phi) <= ar1.supremum + 1e-9);
    }
}
