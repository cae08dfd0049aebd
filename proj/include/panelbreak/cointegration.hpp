#pragma once

#include <string>
#include <vector>

#include "panelbreak/panel.hpp"
#include "panelbreak/stats.hpp"

namespace panelbreak {

enum class PedroniStat {
    panel_v,
    panel_rho,
    panel_pp,
    panel_adf,
    group_rho,
    group_pp,
    group_adf,
};

std::string to_string(PedroniStat s);

struct PedroniRow {
    PedroniStat stat = PedroniStat::panel_v;
    double raw = 0.0;        // unstandardized panel functional
    double z = 0.0;          // (raw - mu*sqrt(N)) / sqrt(nu)
    double p_value = 1.0;    // right tail for panel_v, left tail otherwise
    bool reject_5pct = false;
};

struct PedroniResult {
    std::vector<PedroniRow> rows;  // the seven statistics, fixed order
    int n_rejections = 0;
    bool decision_cointegrated = false;  // majority rule: at least 4 of 7
    std::size_t n_entities = 0;
    int m_regressors = 0;
    stats::Deterministic deterministic = stats::Deterministic::constant;
    std::vector<std::string> dropped;
    std::vector<std::string> notes;
};

// Residual-based cointegration battery over heterogeneous per-entity first
// stages of `dependent` on `regressors` (plus intercept / intercept+trend).
// Rejection of the no-cointegration null is one-sided at 5%.
PedroniResult pedroni_tests(const PanelDataset& p, const std::string& dependent,
                            const std::vector<std::string>& regressors,
                            stats::Deterministic det);

// First-stage residual series of one entity (used by tests and tools).
std::vector<double> entity_cointegrating_residuals(const FrameView& frame,
                                                   stats::Deterministic det);

namespace cointegration_detail {

// Per-entity building blocks, all invariant to rescaling the entity's data.
// a/b/s feed the pooled statistics (long-run-conditional-variance weighted,
// 1/n and 1/n^2 normalized); g_* feed the group-mean statistics; *_star are
// the lag-augmented versions.
struct EntityIngredients {
    double a = 0.0, b = 0.0, s = 0.0;
    double a_star = 0.0, b_star = 0.0, s_star = 0.0;
    double g_num = 0.0, g_den = 0.0, g_sig2 = 0.0;
    double adf_t = 0.0;
    int nobs = 0;       // residual-regression terms (levels length - 1)
    int adf_lags = 0;
};

// `frame` columns: dependent first, regressors after.
EntityIngredients entity_ingredients(const FrameView& frame, stats::Deterministic det,
                                     int adf_lags = -1);

// Raw panel functionals from per-entity ingredients, in PedroniStat order.
std::vector<double> raw_statistics(const std::vector<EntityIngredients>& parts);

}  // namespace cointegration_detail

namespace pedroni_tables {

// Asymptotic mean/variance of the raw statistic: z = (raw - mu*sqrt(N))/sqrt(nu).
struct MomentRow {
    double mu = 0.0;
    double nu = 1.0;
};
MomentRow moments(PedroniStat stat, int m_regressors, stats::Deterministic det);

}  // namespace pedroni_tables

}  // namespace panelbreak
