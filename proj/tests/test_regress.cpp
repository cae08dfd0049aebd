#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "panelbreak/errors.hpp"
#include "panelbreak/regress.hpp"
#include "panelbreak/rng.hpp"
#include "panelbreak/stats.hpp"

using namespace panelbreak;

TEST_CASE("least squares reproduces an exact linear relation") {
    Eigen::MatrixXd X(6, 2);
    Eigen::VectorXd y(6);
    for (int i = 0; i < 6; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = double(i);
        y(i) = 4.0 - 3.0 * double(i);
    }
    OlsFit fit = ols(y, X);
    CHECK(std::fabs(fit.coefficients(0) - 4.0) < 1e-10);
    CHECK(std::fabs(fit.coefficients(1) + 3.0) < 1e-10);
    CHECK(fit.sigma2 < 1e-16);
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.nobs == 6);
    CHECK(fit.df_resid == 4);
}

TEST_CASE("an intercept-only fit returns the sample mean") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(5, 1);
    Eigen::VectorXd y(5);
    y << 1.0, 2.0, 3.0, 4.0, 10.0;
    OlsFit fit = ols(y, X);
    CHECK(fit.coefficients(0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("coefficients agree with an explicit normal-equations solve") {
    SplitRng rng(300);
    const int n = 200, k = 4;
    Eigen::MatrixXd X(n, k);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        for (int j = 1; j < k; ++j) X(i, j) = rng.normal();
        y(i) = 0.3 * X(i, 1) - 1.2 * X(i, 2) + 0.05 * X(i, 3) + rng.normal();
    }
    OlsFit fit = ols(y, X);
    Eigen::VectorXd direct = (X.transpose() * X).ldlt().solve(X.transpose() * y);
    for (int j = 0; j < k; ++j) CHECK(std::fabs(fit.coefficients(j) - direct(j)) < 1e-8);

    // covariance diagonal matches sigma2 * (X'X)^-1
    Eigen::MatrixXd xtx_inv = (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    for (int j = 0; j < k; ++j)
        CHECK(std::fabs(fit.covariance(j, j) - fit.sigma2 * xtx_inv(j, j)) < 1e-10);
}

TEST_CASE("residuals are orthogonal to the design") {
    SplitRng rng(301);
    Eigen::MatrixXd X(150, 3);
    Eigen::VectorXd y(150);
    for (int i = 0; i < 150; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = rng.normal();
        X(i, 2) = rng.uniform();
        y(i) = X(i, 1) + rng.normal();
    }
    OlsFit fit = ols(y, X);
    Eigen::VectorXd cross = X.transpose() * fit.residuals;
    CHECK(cross.norm() / (X.norm() * std::max(fit.residuals.norm(), 1e-12)) < 1e-10);
}

TEST_CASE("rank-deficient designs are refused") {
    Eigen::MatrixXd X(10, 3);
    Eigen::VectorXd y(10);
    for (int i = 0; i < 10; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = double(i);
        X(i, 2) = 2.0 * double(i);  // exact duplicate direction
        y(i) = double(i % 3);
    }
    CHECK_THROWS_AS(ols(y, X), RankDeficient);

    Eigen::VectorXd bad(9);
    CHECK_THROWS_AS(ols(bad, X), ShapeMismatch);
}

TEST_CASE("a single linear restriction reproduces the squared t-ratio") {
    SplitRng rng(302);
    Eigen::MatrixXd X(80, 3);
    Eigen::VectorXd y(80);
    for (int i = 0; i < 80; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = rng.normal();
        X(i, 2) = rng.normal();
        y(i) = 0.4 * X(i, 1) + rng.normal();
    }
    OlsFit fit = ols(y, X);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(1, 3);
    R(0, 2) = 1.0;
    TestReport rep = wald(fit, R, Eigen::VectorXd::Zero(1));
    const double t = fit.t_ratio(2);
    CHECK(std::fabs(rep.statistic - t * t) < 1e-10);
    CHECK(rep.distribution.kind == Distribution::Kind::chi_square);
    CHECK(rep.distribution.df1 == doctest::Approx(1.0));

    // testing the estimate against itself gives a zero statistic
    Eigen::VectorXd at_estimate(1);
    at_estimate << fit.coefficients(2);
    TestReport zero = wald(fit, R, at_estimate);
    CHECK(std::fabs(zero.statistic) < 1e-12);
    CHECK(zero.p_value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the joint statistic is invariant to reparameterized restrictions") {
    SplitRng rng(303);
    Eigen::MatrixXd X(90, 4);
    Eigen::VectorXd y(90);
    for (int i = 0; i < 90; ++i) {
        X(i, 0) = 1.0;
        for (int j = 1; j < 4; ++j) X(i, j) = rng.normal();
        y(i) = 0.2 * X(i, 1) + rng.normal();
    }
    OlsFit fit = ols(y, X);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(2, 4);
    R(0, 2) = 1.0;
    R(1, 3) = 1.0;
    Eigen::VectorXd r = Eigen::VectorXd::Zero(2);

    Eigen::MatrixXd M(2, 2);
    M << 2.0, 1.0, -1.0, 3.0;  // nonsingular mixing of the two restrictions
    TestReport a = wald(fit, R, r);
    TestReport b = wald(fit, M * R, M * r);
    CHECK(std::fabs(a.statistic - b.statistic) < 1e-8);
    CHECK(std::fabs(a.p_value - b.p_value) < 1e-10);
}

TEST_CASE("redundant restriction sets are refused") {
    SplitRng rng(304);
    Eigen::MatrixXd X(40, 3);
    Eigen::VectorXd y(40);
    for (int i = 0; i < 40; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = rng.normal();
        X(i, 2) = rng.normal();
        y(i) = rng.normal();
    }
    OlsFit fit = ols(y, X);
    Eigen::MatrixXd R(2, 3);
    R.row(0) << 0.0, 1.0, 0.0;
    R.row(1) << 0.0, 2.0, 0.0;  // same direction twice
    CHECK_THROWS_AS(wald(fit, R, Eigen::VectorXd::Zero(2)), SingularRestriction);
}

TEST_CASE("the restriction test holds its nominal size on clean noise") {
    int rejections = 0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) {
        SplitRng rng(30000u + static_cast<unsigned>(r));
        Eigen::MatrixXd X(100, 4);
        Eigen::VectorXd y(100);
        for (int i = 0; i < 100; ++i) {
            X(i, 0) = 1.0;
            for (int j = 1; j < 4; ++j) X(i, j) = rng.normal();
            y(i) = 1.0 + 0.5 * X(i, 1) + rng.normal();  // last two slopes are truly zero
        }
        OlsFit fit = ols(y, X);
        Eigen::MatrixXd R = Eigen::MatrixXd::Zero(1, 4);
        R(0, 3) = 1.0;
        if (wald(fit, R, Eigen::VectorXd::Zero(1)).p_value < 0.05) ++rejections;
    }
    const double rate = double(rejections) / reps;
    CHECK(rate >= 0.03);
    CHECK(rate <= 0.07);
}

TEST_CASE("zero-bandwidth long-run variance is the plain sample variance") {
    SplitRng rng(305);
    std::vector<double> u(400);
    for (auto& x : u) x = 2.0 * rng.normal() + 1.0;
    double mean = 0.0;
    for (double x : u) mean += x;
    mean /= double(u.size());
    double var = 0.0;
    for (double x : u) var += (x - mean) * (x - mean);
    var /= double(u.size());
    CHECK(std::fabs(long_run_variance(u, 0) - var) < 1e-12);
}

TEST_CASE("long-run variance captures moving-average persistence") {
    SplitRng rng(11);
    std::vector<double> u(5000);
    double prev = rng.normal();
    for (auto& x : u) {
        const double e = rng.normal();
        x = e + 0.5 * prev;
        prev = e;
    }
    // theoretical long-run variance of an MA(1) with coefficient 0.5: (1 + 0.5)^2
    const double lrv = long_run_variance(u);
    CHECK(lrv > 2.25 * 0.9);
    CHECK(lrv < 2.25 * 1.1);
}

TEST_CASE("long-run variance is even, nonnegative, and floored away from zero") {
    SplitRng rng(306);
    std::vector<double> u(300), neg(300);
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = rng.normal();
        neg[i] = -u[i];
    }
    CHECK(long_run_variance(u) == doctest::Approx(long_run_variance(neg)).epsilon(1e-14));
    CHECK(long_run_variance(u) >= 0.0);

    std::vector<double> constant(50, 3.25);
    CHECK(long_run_variance(constant) >= 1e-12);  // demeaned constant collapses to the floor

    std::vector<double> tiny = {1.0, 2.0};
    CHECK_THROWS_AS(long_run_variance(tiny, 5), SeriesTooShort);
}

TEST_CASE("the default kernel bandwidth follows the deterministic sample rule") {
    CHECK(newey_west_bandwidth(100) == 4);
    CHECK(newey_west_bandwidth(1000) == 6);
    CHECK(newey_west_bandwidth(5000) == 9);
    CHECK(newey_west_bandwidth(25) == 2);
}

TEST_CASE("multivariate long-run covariance matches the scalar path on each column") {
    SplitRng rng(307);
    const int n = 600;
    Eigen::MatrixXd U(n, 2);
    std::vector<double> c0(n), c1(n);
    for (int i = 0; i < n; ++i) {
        c0[static_cast<std::size_t>(i)] = U(i, 0) = rng.normal();
        c1[static_cast<std::size_t>(i)] = U(i, 1) = 0.5 * rng.normal() + 0.1;
    }
    Eigen::MatrixXd omega = long_run_covariance(U);
    CHECK(omega.rows() == 2);
    CHECK(std::fabs(omega(0, 0) - long_run_variance(c0)) < 1e-10);
    CHECK(std::fabs(omega(1, 1) - long_run_variance(c1)) < 1e-10);
    CHECK(std::fabs(omega(0, 1) - omega(1, 0)) < 1e-12);  // symmetric
}
