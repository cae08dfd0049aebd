#pragma once

#include <string>
#include <utility>
#include <vector>

#include "panelbreak/panel.hpp"
#include "panelbreak/stats.hpp"

namespace panelbreak {

enum class UnitRootMethod { LLC, IPS, ADF_FISHER, PP_FISHER };

std::string to_string(UnitRootMethod m);

struct UnitRootResult {
    UnitRootMethod method = UnitRootMethod::LLC;
    double statistic = 0.0;
    double p_value = 1.0;
    struct PerEntity {
        std::string entity;
        double stat = 0.0;
        double p = 1.0;
    };
    std::vector<PerEntity> per_entity;  // filled for IPS and the Fisher tests
    bool differenced = false;
    stats::Deterministic deterministic = stats::Deterministic::constant;
    std::vector<int> lags;              // per included entity, same order as per_entity/entities
    std::vector<std::string> dropped;   // entities excluded, with reasons
};

struct AdfOutcome {
    double stat = 0.0;
    double p = 1.0;
    int lags = 0;
    int nobs_eff = 0;
};

// Augmented Dickey-Fuller t-ratio on the level coefficient of
//   dy_t = delta * y_{t-1} + sum_j phi_j dy_{t-j} + deterministics + e_t.
// lags < 0 selects the lag order by the Schwarz criterion over
// 0..floor(12*(n/100)^(1/4)) on a common estimation sample, then refits on
// the maximal sample. p-value from the MacKinnon response surface.
AdfOutcome adf_stat(const SeriesView& s, stats::Deterministic det, int lags = -1);

// Phillips-Perron Z_t: the zero-lag Dickey-Fuller t-ratio corrected through
// the Bartlett long-run variance of the regression residuals (automatic
// bandwidth). Same p-value surface as adf_stat.
AdfOutcome pp_stat(const SeriesView& s, stats::Deterministic det);

// -2 * sum(log p_i), chi-square with 2N degrees of freedom. Exact.
std::pair<double, double> fisher_combine(const std::vector<double>& per_entity_p);

UnitRootResult llc_test(const PanelDataset& p, const std::string& variable, bool differenced,
                        stats::Deterministic det);
UnitRootResult ips_test(const PanelDataset& p, const std::string& variable, bool differenced,
                        stats::Deterministic det);
UnitRootResult adf_fisher_test(const PanelDataset& p, const std::string& variable, bool differenced,
                               stats::Deterministic det);
UnitRootResult pp_fisher_test(const PanelDataset& p, const std::string& variable, bool differenced,
                              stats::Deterministic det);

namespace unit_root_detail {

// Dickey-Fuller t-ratio at a fixed lag order; used by the moment calibrator
// so that the embedded tables are generated through the exact runtime code
// path. Returns {t, effective obs}.
std::pair<double, int> adf_tstat_fixed(const std::vector<double>& y, stats::Deterministic det,
                                       int lags);

// Building blocks of the pooled adjusted t*: residuals of dy and y_{-1} on
// the nuisance terms, standardized by the innovation s.d. of their own
// Dickey-Fuller step. A = sum(e~ * v~), B = sum(v~^2), C = sum(e~^2).
struct LlcIngredients {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double s_ratio = 1.0;  // long-run to innovation s.d. ratio
    int nobs_eff = 0;
};
LlcIngredients llc_ingredients(const std::vector<double>& y, stats::Deterministic det, int lags);

int schwarz_lag(const std::vector<double>& y, stats::Deterministic det, int max_lag = -1);

}  // namespace unit_root_detail

}  // namespace panelbreak
