#pragma once

#include <string>
#include <vector>

#include "panelbreak/model_spec.hpp"
#include "panelbreak/panel.hpp"
#include "panelbreak/regress.hpp"
#include "panelbreak/vecm.hpp"

namespace panelbreak {

// Wald tests that all lagged-difference coefficients of each non-target
// variable are zero in the target equation, plus the joint block test
// (named "All"). df = lag order per block.
std::vector<TestReport> granger_block_exogeneity(const VecmEstimate& est,
                                                 const std::string& target);

// Residual serial-correlation LM battery. For each h = 1..max_lag two
// reports: the lag-h-only variant ("no serial correlation at lag h") and
// the cumulative variant over lags 1..h ("no serial correlation at lags 1
// to h"), in that order, single-lag rows first. The headline statistic is
// the Edgeworth-corrected likelihood ratio (chi-square); the multivariate
// LM and the Rao F transform ride along in `components`.
std::vector<TestReport> serial_correlation_lm(const VecmEstimate& est, int max_lag);

// System heteroskedasticity test of the residual cross products on the
// equation regressors, their squares and (optionally) pairwise cross
// products. The headline report is the joint statistic; `components` holds
// one row per residual product in res1*res1 .. resK*res(K-1) order.
TestReport heteroskedasticity_white(const VecmEstimate& est, bool cross_terms);

// Weighted slope-dispersion test of per-entity regressions of the first
// endogenous variable on the remaining ones and the dummies. The headline
// statistic is the small-sample-adjusted normal deviate; the unadjusted one
// rides along in `components`. One-sided right by default.
TestReport slope_homogeneity(const PanelDataset& p, const ModelSpec& spec,
                             bool two_sided = false);

}  // namespace panelbreak
