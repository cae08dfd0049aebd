#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "panelbreak/model_spec.hpp"
#include "panelbreak/panel.hpp"

namespace panelbreak {

// One long-run relation in both sign conventions.
//
// Regression form:  y1 = c_i + b'x + sum_d g_d D_d + u   (entity intercepts c_i)
// Table form:       u  = y1 - b'x - c_i - g'D, displayed as the levels vector
//                   (1, -b_2, ..., -b_K) with constant -mean(c_i) and dummy
//                   coefficients -g_d.
struct CointegratingVector {
    std::vector<std::string> variables;   // K endogenous, normalization target first
    std::vector<std::string> dummies;

    Eigen::VectorXd normalized;           // length K, leading element exactly 1
    Eigen::VectorXd normalized_t;         // t-ratios of the displayed coefficients (NaN lead)
    Eigen::VectorXd regression_slopes;    // length K-1: b
    Eigen::VectorXd regression_se;        // classical within standard errors

    std::vector<double> dummy_coefs;      // regression-form g_d
    std::vector<double> dummy_se_hac;     // Bartlett-kernel, entity-clustered
    std::vector<double> dummy_t_hac;
    std::vector<double> dummy_p_hac;
    std::vector<bool> dummy_dropped;      // collinear (e.g. identically zero) columns

    double constant = 0.0;                // regression-form grand intercept
    bool has_trend = false;               // intercept+trend deterministic case
    double trend_coef = 0.0;              // regression-form coefficient on the year
    std::vector<std::string> entities;    // entities entering the pooled fit
    std::vector<double> entity_intercepts;  // regression-form c_i, same order

    std::string method = "two_step";      // "two_step" | "johansen"
    std::vector<std::string> notes;
    int nobs = 0;

    double table_constant() const { return -constant; }
    double table_dummy(std::size_t d) const { return -dummy_coefs[d]; }
};

// Pooled short-run system: K equations of the differenced variables on the
// lagged error-correction term(s), p lags of all differences, a constant and
// the dummies. All equations share the regressor matrix.
struct VecmEstimate {
    ModelSpec spec;
    std::string estimator = "two_step";
    CointegratingVector coint;            // display form (first relation)
    Eigen::MatrixXd alpha;                // K x r loadings
    Eigen::MatrixXd beta;                 // K x r levels part, first column = coint.normalized

    std::vector<std::string> coef_names;  // shared regressor layout
    Eigen::MatrixXd coefficients;         // k_reg x K, one column per equation
    Eigen::MatrixXd std_errors;           // same shape
    Eigen::MatrixXd xtx_inv;              // (X'X)^{-1}, shared across equations
    Eigen::MatrixXd X;                    // stacked regressors (kept for diagnostics)
    Eigen::MatrixXd residuals;            // nobs x K
    Eigen::MatrixXd sigma;                // residual covariance, divisor nobs
    std::vector<double> sigma2;           // per-equation df-adjusted variance
    std::vector<double> r_squared;

    std::vector<std::string> row_entity;  // per stacked row
    std::vector<int> row_year;
    std::vector<std::string> entities;
    std::vector<std::string> dropped;             // entities excluded, with reasons
    std::vector<std::string> dropped_regressors;  // collinear dummy columns removed
    std::vector<std::string> notes;
    int nobs = 0;

    std::size_t k() const { return spec.variables.size(); }
    int ect_terms() const { return static_cast<int>(alpha.cols()); }
};

// Pooled (entity-demeaned) least squares of the first endogenous variable on
// the others and the dummies. Reports both sign conventions; dummy inference
// uses an entity-clustered Bartlett kernel with an AR(1) plug-in bandwidth.
CointegratingVector estimate_long_run(const PanelDataset& p, const ModelSpec& spec);

// Adds the regression-form residual as variable `name`:
// ect = y1 - b'x - c_i - g'D. At in-sample points this reproduces the
// first-stage residual exactly.
PanelDataset build_ect(const PanelDataset& p, const CointegratingVector& beta,
                       const std::string& name = "ect");

// Second stage of the two-step path (rank 1).
VecmEstimate estimate_vecm(const PanelDataset& p, const ModelSpec& spec,
                           const CointegratingVector& beta);

// Reduced-rank (maximum-eigenvalue) path on entity-demeaned levels; the
// dummies enter the short-run design unrestricted. Gives exactly K - r
// unit companion roots.
VecmEstimate johansen_vecm(const PanelDataset& p, const ModelSpec& spec);

// Levels representation: A_1 = I + alpha beta' + G_1, A_j = G_j - G_{j-1},
// A_{p+1} = -G_p.
std::vector<Eigen::MatrixXd> to_levels_var(const VecmEstimate& est);

}  // namespace panelbreak
