#include "panelbreak/cointegration.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>

#include "panelbreak/errors.hpp"
#include "panelbreak/regress.hpp"
#include "panelbreak/unit_root.hpp"

namespace panelbreak {

using stats::Deterministic;

std::string to_string(PedroniStat s) {
    switch (s) {
        case PedroniStat::panel_v: return "panel_v";
        case PedroniStat::panel_rho: return "panel_rho";
        case PedroniStat::panel_pp: return "panel_pp";
        case PedroniStat::panel_adf: return "panel_adf";
        case PedroniStat::group_rho: return "group_rho";
        case PedroniStat::group_pp: return "group_pp";
        case PedroniStat::group_adf: return "group_adf";
    }
    return "?";
}

namespace {

constexpr std::array<PedroniStat, 7> kStatOrder = {
    PedroniStat::panel_v,  PedroniStat::panel_rho, PedroniStat::panel_pp,
    PedroniStat::panel_adf, PedroniStat::group_rho, PedroniStat::group_pp,
    PedroniStat::group_adf,
};

// Long-run variance of the dependent difference conditional on the regressor
// differences: Omega_11 - Omega_21' Omega_22^{-1} Omega_21, floored away
// from zero. Differences are demeaned (the first stage carries an intercept
// in every supported case).
double conditional_long_run_variance(const FrameView& frame) {
    const int n = static_cast<int>(frame.rows()) - 1;
    const int kcols = static_cast<int>(frame.columns.size());
    Eigen::MatrixXd d(n, kcols);
    for (int c = 0; c < kcols; ++c) {
        for (int t = 0; t < n; ++t) {
            d(t, c) = frame.columns[static_cast<std::size_t>(c)][static_cast<std::size_t>(t) + 1] -
                      frame.columns[static_cast<std::size_t>(c)][static_cast<std::size_t>(t)];
        }
    }
    Eigen::MatrixXd omega = long_run_covariance(d, -1, true);
    const double o11 = omega(0, 0);
    if (kcols == 1) return std::max(o11, 1e-12);
    Eigen::MatrixXd o22 = omega.bottomRightCorner(kcols - 1, kcols - 1);
    Eigen::VectorXd o21 = omega.col(0).tail(kcols - 1);
    o22.diagonal().array() += 1e-12;  // guard near-singular regressor blocks
    Eigen::LLT<Eigen::MatrixXd> llt(o22);
    double cond = o11;
    if (llt.info() == Eigen::Success) {
        cond = o11 - o21.dot(llt.solve(o21));
    }
    return std::max(cond, 1e-12);
}

}  // namespace

std::vector<double> entity_cointegrating_residuals(const FrameView& frame, Deterministic det) {
    if (det == Deterministic::none) {
        throw InvalidSpec("the first-stage regression requires an intercept or intercept+trend");
    }
    const int n = static_cast<int>(frame.rows());
    const int m = static_cast<int>(frame.columns.size()) - 1;
    const int ndet = det == Deterministic::constant ? 1 : 2;
    if (n < m + ndet + 4) {
        throw SeriesTooShort("entity '" + frame.entity + "' has " + std::to_string(n) +
                             " aligned observations, too few for the first-stage regression");
    }
    Eigen::VectorXd y(n);
    Eigen::MatrixXd X(n, m + ndet);
    for (int t = 0; t < n; ++t) {
        y(t) = frame.columns[0][static_cast<std::size_t>(t)];
        for (int j = 0; j < m; ++j) {
            X(t, j) = frame.columns[static_cast<std::size_t>(j) + 1][static_cast<std::size_t>(t)];
        }
        X(t, m) = 1.0;
        if (ndet == 2) X(t, m + 1) = static_cast<double>(t + 1);
    }
    OlsFit fit = ols(y, X);
    return {fit.residuals.data(), fit.residuals.data() + n};
}

namespace cointegration_detail {

EntityIngredients entity_ingredients(const FrameView& frame, Deterministic det, int adf_lags) {
    const std::vector<double> e = entity_cointegrating_residuals(frame, det);
    const double l2 = conditional_long_run_variance(frame);

    const int n = static_cast<int>(e.size()) - 1;  // residual-regression terms
    EntityIngredients out;
    out.nobs = n;

    // rho-step: e_t on e_{t-1}, no deterministics.
    double num0 = 0.0, den0 = 0.0;
    for (int t = 1; t <= n; ++t) {
        num0 += e[static_cast<std::size_t>(t) - 1] * e[static_cast<std::size_t>(t)];
        den0 += e[static_cast<std::size_t>(t) - 1] * e[static_cast<std::size_t>(t) - 1];
    }
    if (den0 <= 0.0) throw NumericError("degenerate first-stage residuals for '" + frame.entity + "'");
    const double rho = num0 / den0;
    std::vector<double> u(static_cast<std::size_t>(n));
    double ssr = 0.0;
    for (int t = 1; t <= n; ++t) {
        u[static_cast<std::size_t>(t) - 1] =
            e[static_cast<std::size_t>(t)] - rho * e[static_cast<std::size_t>(t) - 1];
        ssr += u[static_cast<std::size_t>(t) - 1] * u[static_cast<std::size_t>(t) - 1];
    }
    const double s2 = ssr / n;
    const double sig2 = long_run_variance(u, -1, false);
    const double lambda = 0.5 * (sig2 - s2);

    // Sum e_{t-1} * de_t = num0 - den0.
    const double num = (num0 - den0) - n * lambda;
    out.a = (num / n) / l2;
    out.b = (den0 / (static_cast<double>(n) * n)) / l2;
    out.s = sig2 / l2;
    out.g_num = num;
    out.g_den = den0;
    out.g_sig2 = sig2;

    // Lag-augmented step on the residual series, no deterministics.
    const int p = adf_lags >= 0 ? adf_lags : unit_root_detail::schwarz_lag(e, Deterministic::none, -1);
    out.adf_lags = p;
    const int n_star = static_cast<int>(e.size()) - 1 - p;
    Eigen::VectorXd de(n_star), elag(n_star);
    Eigen::MatrixXd L(n_star, p);
    for (int r = 0; r < n_star; ++r) {
        const int t = p + 1 + r;
        de(r) = e[static_cast<std::size_t>(t)] - e[static_cast<std::size_t>(t) - 1];
        elag(r) = e[static_cast<std::size_t>(t) - 1];
        for (int j = 1; j <= p; ++j) {
            L(r, j - 1) = e[static_cast<std::size_t>(t - j)] - e[static_cast<std::size_t>(t - j) - 1];
        }
    }
    Eigen::VectorXd et = de, vt = elag;
    if (p > 0) {
        et = ols(de, L).residuals;
        vt = ols(elag, L).residuals;
    }
    const double vv = vt.squaredNorm();
    if (vv <= 0.0) throw NumericError("degenerate lagged residual regressor for '" + frame.entity + "'");
    const double dhat = et.dot(vt) / vv;
    const double s2_star = std::max((et - dhat * vt).squaredNorm() / n_star, 1e-300);

    out.a_star = (et.dot(vt) / n_star) / l2;
    out.b_star = (vv / (static_cast<double>(n_star) * n_star)) / l2;
    out.s_star = s2_star / l2;
    out.adf_t = dhat * std::sqrt(vv) / std::sqrt(s2_star);
    return out;
}

std::vector<double> raw_statistics(const std::vector<EntityIngredients>& parts) {
    const double n = static_cast<double>(parts.size());
    double sum_a = 0, sum_b = 0, sum_s = 0;
    double sum_as = 0, sum_bs = 0, sum_ss = 0;
    double g_rho = 0, g_pp = 0, g_adf = 0;
    for (const auto& q : parts) {
        sum_a += q.a;
        sum_b += q.b;
        sum_s += q.s;
        sum_as += q.a_star;
        sum_bs += q.b_star;
        sum_ss += q.s_star;
        g_rho += q.nobs * q.g_num / q.g_den;
        g_pp += q.g_num / std::sqrt(q.g_sig2 * q.g_den);
        g_adf += q.adf_t;
    }
    const double mean_a = sum_a / n, mean_b = sum_b / n, mean_s = sum_s / n;
    const double mean_as = sum_as / n, mean_bs = sum_bs / n, mean_ss = sum_ss / n;
    const double rn = std::sqrt(n);

    std::vector<double> raw(7, 0.0);
    raw[0] = n * rn / sum_b;                                  // panel_v
    raw[1] = rn * mean_a / mean_b;                            // panel_rho
    raw[2] = rn * mean_a / std::sqrt(mean_s * mean_b);        // panel_pp
    raw[3] = rn * mean_as / std::sqrt(mean_ss * mean_bs);     // panel_adf
    raw[4] = g_rho / rn;                                      // group_rho
    raw[5] = g_pp / rn;                                       // group_pp
    raw[6] = g_adf / rn;                                      // group_adf
    return raw;
}

}  // namespace cointegration_detail

PedroniResult pedroni_tests(const PanelDataset& p, const std::string& dependent,
                            const std::vector<std::string>& regressors, Deterministic det) {
    if (regressors.empty()) throw InvalidSpec("cointegration battery needs at least one regressor");
    const int m = static_cast<int>(regressors.size());

    std::vector<std::string> vars;
    vars.push_back(dependent);
    vars.insert(vars.end(), regressors.begin(), regressors.end());

    PedroniResult res;
    res.deterministic = det;
    res.m_regressors = m;

    const std::size_t min_len =
        std::max<std::size_t>(12, static_cast<std::size_t>(m) + (det == Deterministic::constant ? 1 : 2) + 6);
    std::vector<cointegration_detail::EntityIngredients> parts;
    for (const auto& entity : p.entities()) {
        auto frame = entity_frame(p, entity, vars);
        if (!frame || frame->rows() < min_len) {
            res.dropped.push_back(entity + ": aligned run of " +
                                  std::to_string(frame ? frame->rows() : 0) + " < required " +
                                  std::to_string(min_len));
            continue;
        }
        parts.push_back(cointegration_detail::entity_ingredients(*frame, det));
    }
    if (parts.size() < 2) {
        throw InsufficientEntities("cointegration battery needs at least 2 usable entities, has " +
                                   std::to_string(parts.size()));
    }
    res.n_entities = parts.size();

    const std::vector<double> raw = cointegration_detail::raw_statistics(parts);
    const double rn = std::sqrt(static_cast<double>(parts.size()));
    for (std::size_t i = 0; i < kStatOrder.size(); ++i) {
        const PedroniStat st = kStatOrder[i];
        const auto mom = pedroni_tables::moments(st, m, det);
        PedroniRow row;
        row.stat = st;
        row.raw = raw[i];
        row.z = (raw[i] - mom.mu * rn) / std::sqrt(mom.nu);
        if (st == PedroniStat::panel_v) {
            row.p_value = stats::normal_sf(row.z);  // diverges to +inf under cointegration
        } else {
            row.p_value = stats::normal_cdf(row.z);
        }
        row.reject_5pct = row.p_value < 0.05;
        if (row.reject_5pct) ++res.n_rejections;
        res.rows.push_back(row);
    }
    res.decision_cointegrated = res.n_rejections >= 4;
    return res;
}

}  // namespace panelbreak
