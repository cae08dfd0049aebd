#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "panelbreak/errors.hpp"

namespace panelbreak {

struct OlsFit {
    Eigen::VectorXd coefficients;
    Eigen::MatrixXd covariance;  // sigma2 * (X'X)^{-1}
    Eigen::VectorXd residuals;
    double sigma2 = 0.0;
    int nobs = 0;
    int df_resid = 0;
    double r_squared = 0.0;

    double std_error(int i) const { return std::sqrt(covariance(i, i)); }
    double t_ratio(int i) const { return coefficients(i) / std_error(i); }
};

// Least squares via column-pivoted Householder QR. Designs whose triangular
// factor has a diagonal ratio beyond 1e12 are rejected as rank deficient.
OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X);

struct Distribution {
    enum class Kind { chi_square, f, normal };
    Kind kind = Kind::chi_square;
    double df1 = 0.0;
    double df2 = 0.0;
};

// Shared result layout of the scalar tests (Wald and the residual
// diagnostics). `components` is an optional sub-table.
struct TestReport {
    std::string name;
    double statistic = 0.0;
    Distribution distribution;
    double p_value = 1.0;
    bool reject_5pct = false;

    struct Row {
        std::string label;
        std::vector<double> values;
    };
    std::vector<std::string> component_columns;
    std::vector<Row> components;
};

// Wald test of R beta = r; statistic (R b - r)'[R Cov R']^{-1}(R b - r),
// chi-square with rows(R) degrees of freedom.
TestReport wald(const OlsFit& fit, const Eigen::MatrixXd& R, const Eigen::VectorXd& r);

// Conventional automatic truncation lag floor(4 * (n/100)^(2/9)).
int newey_west_bandwidth(int n);

// Bartlett-kernel long-run variance gamma_0 + 2 * sum w_j gamma_j with
// w_j = 1 - j/(L+1). Autocovariances use divisor n; the series mean is
// removed first unless demean = false. Result floored at 1e-12.
// bandwidth < 0 selects the automatic rule.
double long_run_variance(std::span<const double> u, int bandwidth = -1, bool demean = true);

// Matrix version: Omega = Gamma_0 + sum w_j (Gamma_j + Gamma_j').
Eigen::MatrixXd long_run_covariance(const Eigen::MatrixXd& u, int bandwidth = -1,
                                    bool demean = true);

}  // namespace panelbreak
