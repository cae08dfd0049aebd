#include "panelbreak/unit_root.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>

#include "panelbreak/errors.hpp"
#include "panelbreak/regress.hpp"
#include "panelbreak/unit_root_tables.hpp"

namespace panelbreak {

using stats::Deterministic;

std::string to_string(UnitRootMethod m) {
    switch (m) {
        case UnitRootMethod::LLC: return "llc";
        case UnitRootMethod::IPS: return "ips";
        case UnitRootMethod::ADF_FISHER: return "adf_fisher";
        case UnitRootMethod::PP_FISHER: return "pp_fisher";
    }
    return "?";
}

namespace {

int n_deterministic(Deterministic det) {
    switch (det) {
        case Deterministic::none: return 0;
        case Deterministic::constant: return 1;
        case Deterministic::constant_trend: return 2;
    }
    return 1;
}

// Rows t = start .. n-1 of dy_t = delta*y_{t-1} + phi_1 dy_{t-1} + ... +
// phi_p dy_{t-p} + deterministics. Column order: y_{t-1}, dy lags, const,
// trend.
struct AdfDesign {
    Eigen::VectorXd dy;
    Eigen::MatrixXd X;
};

AdfDesign build_adf_design(const std::vector<double>& y, Deterministic det, int p, int start) {
    const int n = static_cast<int>(y.size());
    const int m = n - start;
    const int k = 1 + p + n_deterministic(det);
    AdfDesign d;
    d.dy.resize(m);
    d.X.resize(m, k);
    for (int r = 0; r < m; ++r) {
        const int t = start + r;
        d.dy(r) = y[t] - y[t - 1];
        d.X(r, 0) = y[t - 1];
        for (int j = 1; j <= p; ++j) d.X(r, j) = y[t - j] - y[t - j - 1];
        int c = 1 + p;
        if (det != Deterministic::none) d.X(r, c++) = 1.0;
        if (det == Deterministic::constant_trend) d.X(r, c++) = static_cast<double>(t + 1);
    }
    return d;
}

// Largest admissible augmentation for a series of length n: the common
// estimation sample must keep at least 10 observations and 2 residual
// degrees of freedom.
int max_feasible_lag(int n, Deterministic det, int requested) {
    int cap = requested;
    const int ndet = n_deterministic(det);
    while (cap >= 0) {
        const int m = n - 1 - cap;
        const int k = 1 + cap + ndet;
        if (m >= 10 && m >= k + 2) break;
        --cap;
    }
    return cap;
}

int default_max_lag(int n) {
    return static_cast<int>(std::floor(12.0 * std::pow(n / 100.0, 0.25)));
}

struct CollectedPanel {
    std::vector<SeriesView> series;
    std::vector<std::string> dropped;
};

// Shared entry gate of the four panel tests: per-entity longest runs, first
// differencing on request, and a minimum usable length of 12 points.
CollectedPanel collect_series(const PanelDataset& p, const std::string& variable,
                              bool differenced) {
    constexpr std::size_t kMinLen = 12;
    CollectedPanel out;
    const std::size_t min_raw = differenced ? kMinLen + 1 : kMinLen;
    out.series = p.usable_series(variable, min_raw, &out.dropped);
    if (differenced) {
        for (auto& s : out.series) s = first_difference(s);
    }
    if (out.series.size() < 2) {
        throw InsufficientEntities("panel unit-root test on '" + variable + "' needs at least 2 usable entities, has " +
                                   std::to_string(out.series.size()));
    }
    return out;
}

}  // namespace

namespace unit_root_detail {

int schwarz_lag(const std::vector<double>& y, Deterministic det, int max_lag) {
    const int n = static_cast<int>(y.size());
    if (max_lag < 0) max_lag = default_max_lag(n);
    max_lag = max_feasible_lag(n, det, max_lag);
    if (max_lag < 0) {
        throw SeriesTooShort("series of length " + std::to_string(n) +
                             " too short for a Dickey-Fuller regression");
    }
    const int start = max_lag + 1;  // common sample across candidate orders
    const int m = n - start;
    int best_p = 0;
    double best_sic = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= max_lag; ++p) {
        AdfDesign d = build_adf_design(y, det, p, start);
        OlsFit fit = ols(d.dy, d.X);
        const double rss = std::max(fit.residuals.squaredNorm(), 1e-300);
        const double k = static_cast<double>(d.X.cols());
        const double sic = std::log(rss / m) + k * std::log(static_cast<double>(m)) / m;
        if (sic < best_sic) {
            best_sic = sic;
            best_p = p;
        }
    }
    return best_p;
}

std::pair<double, int> adf_tstat_fixed(const std::vector<double>& y, Deterministic det, int lags) {
    const int n = static_cast<int>(y.size());
    const int m = n - 1 - lags;
    const int k = 1 + lags + n_deterministic(det);
    if (lags < 0 || m < k + 1) {
        throw SeriesTooShort("series of length " + std::to_string(n) +
                             " cannot support a Dickey-Fuller regression with " +
                             std::to_string(lags) + " lags");
    }
    AdfDesign d = build_adf_design(y, det, lags, lags + 1);
    OlsFit fit = ols(d.dy, d.X);
    return {fit.t_ratio(0), m};
}

LlcIngredients llc_ingredients(const std::vector<double>& y, Deterministic det, int lags) {
    const int n = static_cast<int>(y.size());
    const int start = lags + 1;
    const int m = n - start;
    const int ndet = n_deterministic(det);
    if (m < lags + ndet + 3) {
        throw SeriesTooShort("series of length " + std::to_string(n) +
                             " too short for the pooled-test ingredient step");
    }

    AdfDesign d = build_adf_design(y, det, lags, start);
    Eigen::VectorXd ylag(m);
    for (int r = 0; r < m; ++r) ylag(r) = d.X(r, 0);

    Eigen::VectorXd e, v;
    const int k_nuis = lags + ndet;
    if (k_nuis == 0) {
        e = d.dy;
        v = ylag;
    } else {
        Eigen::MatrixXd W = d.X.rightCols(k_nuis);
        e = ols(d.dy, W).residuals;
        v = ols(ylag, W).residuals;
    }

    const double vv = v.squaredNorm();
    if (vv <= 0.0) throw NumericError("degenerate lagged-level regressor in pooled-test step");
    const double delta = e.dot(v) / vv;
    const Eigen::VectorXd resid = e - delta * v;
    const double sig2e = std::max(resid.squaredNorm() / m, 1e-300);

    LlcIngredients out;
    out.A = e.dot(v) / sig2e;
    out.B = vv / sig2e;
    out.C = e.squaredNorm() / sig2e;
    out.nobs_eff = m;

    // Ratio of the long-run to the innovation standard deviation, from the
    // full first-difference sample (Bartlett kernel, automatic bandwidth).
    std::vector<double> diff(y.size() - 1);
    for (std::size_t t = 1; t < y.size(); ++t) diff[t - 1] = y[t] - y[t - 1];
    const bool demean = det != Deterministic::none;
    const double lrv = long_run_variance(diff, -1, demean);
    out.s_ratio = std::sqrt(lrv) / std::sqrt(sig2e);
    return out;
}

}  // namespace unit_root_detail

AdfOutcome adf_stat(const SeriesView& s, Deterministic det, int lags) {
    const std::vector<double>& y = s.data;
    const int n = static_cast<int>(y.size());
    int p = lags;
    if (p < 0) {
        p = unit_root_detail::schwarz_lag(y, det, -1);
    } else if (max_feasible_lag(n, det, p) < p) {
        throw SeriesTooShort("series '" + s.entity + "/" + s.variable + "' of length " +
                             std::to_string(n) + " too short for " + std::to_string(p) + " lags");
    }
    auto [t, m] = unit_root_detail::adf_tstat_fixed(y, det, p);
    AdfOutcome out;
    out.stat = t;
    out.p = stats::mackinnon_pvalue(t, det);
    out.lags = p;
    out.nobs_eff = m;
    return out;
}

AdfOutcome pp_stat(const SeriesView& s, Deterministic det) {
    const std::vector<double>& y = s.data;
    const int n = static_cast<int>(y.size());
    if (max_feasible_lag(n, det, 0) < 0) {
        throw SeriesTooShort("series '" + s.entity + "/" + s.variable + "' of length " +
                             std::to_string(n) + " too short for the semiparametric correction");
    }
    AdfDesign d = build_adf_design(y, det, 0, 1);
    OlsFit fit = ols(d.dy, d.X);
    const int m = fit.nobs;
    const double t0 = fit.t_ratio(0);
    const double gamma0 = fit.residuals.squaredNorm() / m;
    const int bw = newey_west_bandwidth(m);
    const double lam2 = long_run_variance(
        std::span<const double>(fit.residuals.data(), static_cast<std::size_t>(m)), bw, false);
    const double lam = std::sqrt(lam2);
    const double se0 = fit.std_error(0);
    const double sd = std::sqrt(fit.sigma2);

    const double z = std::sqrt(gamma0 / lam2) * t0 - (lam2 - gamma0) * m * se0 / (2.0 * lam * sd);

    AdfOutcome out;
    out.stat = z;
    out.p = stats::mackinnon_pvalue(z, det);
    out.lags = bw;  // truncation lag of the kernel estimate
    out.nobs_eff = m;
    return out;
}

std::pair<double, double> fisher_combine(const std::vector<double>& per_entity_p) {
    if (per_entity_p.empty()) throw InvalidPValue("cannot combine an empty probability set");
    double stat = 0.0;
    for (double p : per_entity_p) {
        if (!(p > 0.0) || p > 1.0) {
            throw InvalidPValue("probability outside (0, 1] in combination: " + std::to_string(p));
        }
        stat += -2.0 * std::log(p);
    }
    const double df = 2.0 * static_cast<double>(per_entity_p.size());
    return {stat, stats::chi2_sf(stat, df)};
}

UnitRootResult llc_test(const PanelDataset& panel, const std::string& variable, bool differenced,
                        Deterministic det) {
    CollectedPanel cp = collect_series(panel, variable, differenced);

    UnitRootResult res;
    res.method = UnitRootMethod::LLC;
    res.differenced = differenced;
    res.deterministic = det;
    res.dropped = cp.dropped;

    double sum_A = 0.0, sum_B = 0.0, sum_C = 0.0, sum_s = 0.0;
    long total = 0;
    for (const auto& s : cp.series) {
        const int p = unit_root_detail::schwarz_lag(s.data, det, -1);
        auto ing = unit_root_detail::llc_ingredients(s.data, det, p);
        res.lags.push_back(p);
        sum_A += ing.A;
        sum_B += ing.B;
        sum_C += ing.C;
        sum_s += ing.s_ratio;
        total += ing.nobs_eff;
    }
    const double n_series = static_cast<double>(cp.series.size());
    const double t_tilde = static_cast<double>(total) / n_series;

    const double delta = sum_A / sum_B;
    const double rss = std::max(sum_C - 2.0 * delta * sum_A + delta * delta * sum_B, 1e-300);
    const double sig2 = rss / static_cast<double>(total);
    const double std_delta = std::sqrt(sig2 / sum_B);
    const double t_delta = delta / std_delta;
    const double s_bar = sum_s / n_series;

    const auto adj = unit_root_tables::llc_adjustment(det, t_tilde);
    const double t_star =
        (t_delta - static_cast<double>(total) * s_bar * (1.0 / sig2) * std_delta * adj.mu) /
        adj.sigma;

    res.statistic = t_star;
    res.p_value = stats::normal_cdf(t_star);
    return res;
}

UnitRootResult ips_test(const PanelDataset& panel, const std::string& variable, bool differenced,
                        Deterministic det) {
    if (det == Deterministic::none) {
        throw InvalidSpec("the group-mean t-bar test requires an intercept or trend");
    }
    CollectedPanel cp = collect_series(panel, variable, differenced);

    UnitRootResult res;
    res.method = UnitRootMethod::IPS;
    res.differenced = differenced;
    res.deterministic = det;
    res.dropped = cp.dropped;

    double sum_t = 0.0, sum_mean = 0.0, sum_var = 0.0;
    for (const auto& s : cp.series) {
        AdfOutcome o = adf_stat(s, det, -1);
        res.per_entity.push_back({s.entity, o.stat, o.p});
        res.lags.push_back(o.lags);
        const auto mom =
            unit_root_tables::ips_moments(det, static_cast<int>(s.data.size()), o.lags);
        sum_t += o.stat;
        sum_mean += mom.mean;
        sum_var += mom.var;
    }
    const double n = static_cast<double>(cp.series.size());
    const double w = std::sqrt(n) * (sum_t / n - sum_mean / n) / std::sqrt(sum_var / n);
    res.statistic = w;
    res.p_value = stats::normal_cdf(w);
    return res;
}

namespace {

UnitRootResult fisher_test_impl(const PanelDataset& panel, const std::string& variable,
                                bool differenced, Deterministic det, UnitRootMethod method) {
    CollectedPanel cp = collect_series(panel, variable, differenced);

    UnitRootResult res;
    res.method = method;
    res.differenced = differenced;
    res.deterministic = det;
    res.dropped = cp.dropped;

    std::vector<double> ps;
    ps.reserve(cp.series.size());
    for (const auto& s : cp.series) {
        const AdfOutcome o =
            method == UnitRootMethod::ADF_FISHER ? adf_stat(s, det, -1) : pp_stat(s, det);
        res.per_entity.push_back({s.entity, o.stat, o.p});
        res.lags.push_back(o.lags);
        ps.push_back(std::clamp(o.p, 1e-16, 1.0));
    }
    auto [stat, p] = fisher_combine(ps);
    res.statistic = stat;
    res.p_value = p;
    return res;
}

}  // namespace

UnitRootResult adf_fisher_test(const PanelDataset& panel, const std::string& variable,
                               bool differenced, Deterministic det) {
    return fisher_test_impl(panel, variable, differenced, det, UnitRootMethod::ADF_FISHER);
}

UnitRootResult pp_fisher_test(const PanelDataset& panel, const std::string& variable,
                              bool differenced, Deterministic det) {
    return fisher_test_impl(panel, variable, differenced, det, UnitRootMethod::PP_FISHER);
}

}  // namespace panelbreak
