#include "panelbreak/vecm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "panelbreak/errors.hpp"
#include "panelbreak/regress.hpp"
#include "panelbreak/stats.hpp"

namespace panelbreak {

using stats::Deterministic;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int n_deterministic(Deterministic det) {
    if (det == Deterministic::none) {
        throw InvalidSpec("the long-run relation requires an intercept or intercept+trend");
    }
    return det == Deterministic::constant ? 1 : 2;
}

struct EntityBlock {
    FrameView frame;  // columns: endogenous..., dummies...
};

// Aligned per-entity frames over every required column, with a minimum
// number of rows; too-short entities are reported, not fatal.
std::vector<EntityBlock> gather_blocks(const PanelDataset& p, const ModelSpec& spec,
                                       std::size_t min_rows, std::vector<std::string>* dropped) {
    const std::vector<std::string> req = spec.required_variables();
    std::vector<EntityBlock> blocks;
    for (const auto& entity : p.entities()) {
        auto frame = entity_frame(p, entity, req);
        if (!frame || frame->rows() < min_rows) {
            if (dropped) {
                dropped->push_back(entity + ": aligned run of " +
                                   std::to_string(frame ? frame->rows() : 0) + " < required " +
                                   std::to_string(min_rows));
            }
            continue;
        }
        blocks.push_back({std::move(*frame)});
    }
    return blocks;
}

// Bartlett-kernel truncation lag via the AR(1) plug-in rule
// S* = 1.1447 (a(1) T)^{1/3}, a(1) = 4 rho^2 / (1 - rho^2)^2, where rho is
// the pooled within-entity lag-1 autocorrelation of the score series.
int plugin_bandwidth(const std::vector<Eigen::VectorXd>& score_blocks, double mean_len) {
    double num = 0.0, den = 0.0;
    for (const auto& s : score_blocks) {
        for (int t = 1; t < s.size(); ++t) {
            num += s(t) * s(t - 1);
            den += s(t - 1) * s(t - 1);
        }
    }
    if (den <= 0.0) return 0;
    double rho = std::clamp(num / den, -0.97, 0.97);
    const double a1 = 4.0 * rho * rho / std::pow((1.0 - rho) * (1.0 + rho), 2.0);
    const double s_star = 1.1447 * std::cbrt(std::max(a1 * mean_len, 0.0));
    int L = static_cast<int>(std::floor(s_star));
    return std::clamp(L, 0, static_cast<int>(mean_len) - 2);
}

}  // namespace

CointegratingVector estimate_long_run(const PanelDataset& p, const ModelSpec& spec) {
    spec.validate();
    const std::size_t K = spec.k();
    const int ndet = n_deterministic(spec.deterministic);
    const bool trend = ndet == 2;
    const std::size_t n_dum = spec.dummies.size();
    const std::size_t n_slope = K - 1;
    // slope block, dummy block, optional trend (the intercepts are absorbed
    // by demeaning and recovered afterwards)
    const std::size_t kx = n_slope + n_dum + (trend ? 1 : 0);

    std::vector<std::string> dropped;
    std::vector<EntityBlock> blocks = gather_blocks(p, spec, kx + 3, &dropped);
    if (blocks.size() < 2) {
        throw InsufficientData("long-run relation needs at least 2 usable entities, has " +
                               std::to_string(blocks.size()));
    }

    std::size_t n = 0;
    for (const auto& b : blocks) n += b.frame.rows();
    const std::size_t min_needed = 30 * (kx + 1);
    if (n < min_needed) {
        throw InsufficientData("long-run relation needs at least " + std::to_string(min_needed) +
                               " pooled observations, has " + std::to_string(n));
    }

    // Stack within-demeaned data; keep per-entity raw means for the
    // intercept recovery.
    Eigen::VectorXd y(n);
    Eigen::MatrixXd X(n, kx);
    std::vector<Eigen::VectorXd> col_means(blocks.size());
    std::vector<double> y_means(blocks.size());
    std::vector<std::size_t> row_of(blocks.size());

    std::size_t row = 0;
    for (std::size_t ib = 0; ib < blocks.size(); ++ib) {
        const FrameView& f = blocks[ib].frame;
        const std::size_t t_i = f.rows();
        row_of[ib] = row;
        Eigen::VectorXd mx = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kx));
        double my = 0.0;
        for (std::size_t t = 0; t < t_i; ++t) {
            const double yv = f.columns[0][t];
            y(static_cast<Eigen::Index>(row + t)) = yv;
            my += yv;
            for (std::size_t j = 0; j < n_slope + n_dum; ++j) {
                const double xv = f.columns[j + 1][t];
                X(static_cast<Eigen::Index>(row + t), static_cast<Eigen::Index>(j)) = xv;
                mx(static_cast<Eigen::Index>(j)) += xv;
            }
            if (trend) {
                const double tv = static_cast<double>(f.first_year) + static_cast<double>(t);
                X(static_cast<Eigen::Index>(row + t), static_cast<Eigen::Index>(kx - 1)) = tv;
                mx(static_cast<Eigen::Index>(kx - 1)) += tv;
            }
        }
        my /= static_cast<double>(t_i);
        mx /= static_cast<double>(t_i);
        y_means[ib] = my;
        col_means[ib] = mx;
        for (std::size_t t = 0; t < t_i; ++t) {
            y(static_cast<Eigen::Index>(row + t)) -= my;
            X.row(static_cast<Eigen::Index>(row + t)) -= mx.transpose();
        }
        row += t_i;
    }

    CointegratingVector cv;
    cv.variables = spec.variables;
    cv.dummies = spec.dummies;
    cv.method = "two_step";
    cv.nobs = static_cast<int>(n);
    cv.dummy_coefs.assign(n_dum, 0.0);
    cv.dummy_se_hac.assign(n_dum, kNaN);
    cv.dummy_t_hac.assign(n_dum, kNaN);
    cv.dummy_p_hac.assign(n_dum, kNaN);
    cv.dummy_dropped.assign(n_dum, false);

    // Demeaned dummy columns with no variation (identically 0 or constant
    // within every entity) are dropped rather than fatal.
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < kx; ++j) {
        const double norm = X.col(static_cast<Eigen::Index>(j)).norm();
        const bool is_dummy = j >= n_slope && j < n_slope + n_dum;
        if (is_dummy && norm < 1e-10 * std::sqrt(static_cast<double>(n))) {
            cv.dummy_dropped[j - n_slope] = true;
            cv.notes.push_back("collinear: dummy '" + spec.dummies[j - n_slope] +
                               "' has no within variation and was dropped");
            continue;
        }
        kept.push_back(j);
    }

    Eigen::MatrixXd Xk(n, kept.size());
    for (std::size_t c = 0; c < kept.size(); ++c) {
        Xk.col(static_cast<Eigen::Index>(c)) = X.col(static_cast<Eigen::Index>(kept[c]));
    }
    OlsFit fit = ols(y, Xk);

    // Proper within degrees of freedom: subtract the absorbed entity means.
    const double df_fe =
        static_cast<double>(n) - static_cast<double>(kept.size()) - static_cast<double>(blocks.size());
    if (df_fe <= 0) throw InsufficientData("no residual degrees of freedom in the pooled long-run fit");
    const double sigma2_fe = fit.residuals.squaredNorm() / df_fe;
    Eigen::MatrixXd cov_fe = fit.covariance * (sigma2_fe / fit.sigma2);

    // Scatter back to the full coefficient layout.
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kx));
    Eigen::VectorXd se = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(kx), kNaN);
    for (std::size_t c = 0; c < kept.size(); ++c) {
        coef(static_cast<Eigen::Index>(kept[c])) = fit.coefficients(static_cast<Eigen::Index>(c));
        se(static_cast<Eigen::Index>(kept[c])) =
            std::sqrt(cov_fe(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)));
    }

    cv.regression_slopes = coef.head(static_cast<Eigen::Index>(n_slope));
    cv.regression_se = se.head(static_cast<Eigen::Index>(n_slope));
    for (std::size_t d = 0; d < n_dum; ++d) {
        if (!cv.dummy_dropped[d]) cv.dummy_coefs[d] = coef(static_cast<Eigen::Index>(n_slope + d));
    }
    cv.has_trend = trend;
    cv.trend_coef = trend ? coef(static_cast<Eigen::Index>(kx - 1)) : 0.0;

    cv.normalized.resize(static_cast<Eigen::Index>(K));
    cv.normalized_t.resize(static_cast<Eigen::Index>(K));
    cv.normalized(0) = 1.0;
    cv.normalized_t(0) = kNaN;
    for (std::size_t j = 0; j < n_slope; ++j) {
        cv.normalized(static_cast<Eigen::Index>(j + 1)) = -cv.regression_slopes(static_cast<Eigen::Index>(j));
        cv.normalized_t(static_cast<Eigen::Index>(j + 1)) =
            -cv.regression_slopes(static_cast<Eigen::Index>(j)) / cv.regression_se(static_cast<Eigen::Index>(j));
    }

    // Entity intercepts and the grand constant (regression form).
    cv.entity_intercepts.resize(blocks.size());
    for (std::size_t ib = 0; ib < blocks.size(); ++ib) {
        double ci = y_means[ib];
        for (std::size_t j = 0; j < kx; ++j) {
            ci -= coef(static_cast<Eigen::Index>(j)) * col_means[ib](static_cast<Eigen::Index>(j));
        }
        cv.entity_intercepts[ib] = ci;
        cv.entities.push_back(blocks[ib].frame.entity);
    }
    cv.constant = std::accumulate(cv.entity_intercepts.begin(), cv.entity_intercepts.end(), 0.0) /
                  static_cast<double>(cv.entity_intercepts.size());

    // Kernel-weighted, entity-clustered covariance for the dummy inference.
    {
        Eigen::MatrixXd A = Xk.transpose() * Xk;
        Eigen::LDLT<Eigen::MatrixXd> aldlt(A);
        double mean_len = static_cast<double>(n) / static_cast<double>(blocks.size());

        for (std::size_t d = 0; d < n_dum; ++d) {
            if (cv.dummy_dropped[d]) continue;
            const std::size_t full_idx = n_slope + d;
            const auto it = std::find(kept.begin(), kept.end(), full_idx);
            const std::size_t cidx = static_cast<std::size_t>(it - kept.begin());

            std::vector<Eigen::VectorXd> score_blocks;
            for (std::size_t ib = 0; ib < blocks.size(); ++ib) {
                const std::size_t t_i = blocks[ib].frame.rows();
                Eigen::VectorXd s(static_cast<Eigen::Index>(t_i));
                for (std::size_t t = 0; t < t_i; ++t) {
                    const Eigen::Index r = static_cast<Eigen::Index>(row_of[ib] + t);
                    s(static_cast<Eigen::Index>(t)) = Xk(r, static_cast<Eigen::Index>(cidx)) * fit.residuals(r);
                }
                score_blocks.push_back(std::move(s));
            }
            const int L = plugin_bandwidth(score_blocks, mean_len);

            Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(Xk.cols(), Xk.cols());
            for (std::size_t ib = 0; ib < blocks.size(); ++ib) {
                const std::size_t t_i = blocks[ib].frame.rows();
                const std::size_t base = row_of[ib];
                Eigen::MatrixXd xb = Xk.middleRows(static_cast<Eigen::Index>(base), static_cast<Eigen::Index>(t_i));
                Eigen::VectorXd ub =
                    fit.residuals.segment(static_cast<Eigen::Index>(base), static_cast<Eigen::Index>(t_i));
                Eigen::MatrixXd su = xb.array().colwise() * ub.array();  // per-row scores
                Eigen::MatrixXd g0 = su.transpose() * su;
                meat += g0;
                for (int l = 1; l <= L && l < static_cast<int>(t_i); ++l) {
                    const double w = 1.0 - static_cast<double>(l) / (L + 1.0);
                    Eigen::MatrixXd gl = su.topRows(static_cast<Eigen::Index>(t_i) - l).transpose() *
                                         su.bottomRows(static_cast<Eigen::Index>(t_i) - l);
                    meat += w * (gl + gl.transpose());
                }
            }
            Eigen::MatrixXd v = aldlt.solve(meat);
            v = aldlt.solve(v.transpose()).transpose();

            const double var_d = v(static_cast<Eigen::Index>(cidx), static_cast<Eigen::Index>(cidx));
            cv.dummy_se_hac[d] = std::sqrt(std::max(var_d, 0.0));
            cv.dummy_t_hac[d] = cv.dummy_coefs[d] / cv.dummy_se_hac[d];
            cv.dummy_p_hac[d] = 2.0 * stats::normal_sf(std::abs(cv.dummy_t_hac[d]));
        }
    }

    return cv;
}

PanelDataset build_ect(const PanelDataset& p, const CointegratingVector& beta,
                       const std::string& name) {
    const std::size_t K = beta.variables.size();
    std::vector<std::size_t> vidx;
    for (const auto& v : beta.variables) vidx.push_back(p.variable_index(v));
    std::vector<std::size_t> didx;
    for (const auto& d : beta.dummies) didx.push_back(p.variable_index(d));

    const std::size_t ne = p.n_entities();
    const std::size_t ny = static_cast<std::size_t>(p.n_years());
    std::vector<std::vector<double>> values(ne, std::vector<double>(ny, 0.0));
    std::vector<std::vector<bool>> observed(ne, std::vector<bool>(ny, false));

    for (std::size_t e = 0; e < ne; ++e) {
        const std::string& entity = p.entities()[e];
        const auto it = std::find(beta.entities.begin(), beta.entities.end(), entity);
        if (it == beta.entities.end()) continue;  // no intercept for excluded entities
        const double ci = beta.entity_intercepts[static_cast<std::size_t>(it - beta.entities.begin())];
        for (int year = p.year_start(); year <= p.year_end(); ++year) {
            bool all = true;
            for (std::size_t v : vidx) {
                if (!p.observed(e, year, v)) { all = false; break; }
            }
            for (std::size_t v : didx) {
                if (!all) break;
                if (!p.observed(e, year, v)) all = false;
            }
            if (!all) continue;
            double ect = p.value(e, year, vidx[0]) - ci;
            for (std::size_t j = 1; j < K; ++j) {
                ect -= beta.regression_slopes(static_cast<Eigen::Index>(j - 1)) * p.value(e, year, vidx[j]);
            }
            for (std::size_t d = 0; d < didx.size(); ++d) {
                ect -= beta.dummy_coefs[d] * p.value(e, year, didx[d]);
            }
            if (beta.has_trend) ect -= beta.trend_coef * static_cast<double>(year);
            const std::size_t yoff = static_cast<std::size_t>(year - p.year_start());
            values[e][yoff] = ect;
            observed[e][yoff] = true;
        }
    }
    return p.with_variable(name, values, observed);
}

namespace {

// Shared assembly of the pooled short-run system once the error-correction
// columns are known. `ect_cols` supplies, per entity block, the
// error-correction values aligned with the block's frame rows.
VecmEstimate assemble_system(const ModelSpec& spec, const std::vector<EntityBlock>& blocks,
                             const std::vector<Eigen::MatrixXd>& ect_cols,
                             std::vector<std::string> dropped, const std::string& estimator_name,
                             const Eigen::MatrixXd& beta_levels) {
    const std::size_t K = spec.k();
    const int p_lags = spec.lag_order;
    const int r = static_cast<int>(ect_cols.front().cols());
    const std::size_t n_dum = spec.dummies.size();

    std::size_t n = 0;
    for (const auto& b : blocks) n += b.frame.rows() - 1 - static_cast<std::size_t>(p_lags);

    const std::size_t k_reg = static_cast<std::size_t>(r) + K * static_cast<std::size_t>(p_lags) + 1 + n_dum;
    if (n < 30 * (k_reg + 1) / 10) {
        // soft floor: at least ~3 observations per coefficient
        if (n <= k_reg + 1) {
            throw InsufficientData("short-run system has " + std::to_string(n) +
                                   " pooled rows for " + std::to_string(k_reg) + " coefficients");
        }
    }

    VecmEstimate est;
    est.spec = spec;
    est.estimator = estimator_name;
    est.dropped = std::move(dropped);

    for (int j = 0; j < r; ++j) {
        est.coef_names.push_back(r == 1 ? std::string("CointEq1")
                                        : "CointEq" + std::to_string(j + 1));
    }
    if (r == 1) est.coef_names.back() = "CointEq1";
    for (std::size_t v = 0; v < K; ++v) {
        for (int l = 1; l <= p_lags; ++l) {
            est.coef_names.push_back("D(" + spec.variables[v] + "(-" + std::to_string(l) + "))");
        }
    }
    est.coef_names.push_back("C");
    for (const auto& d : spec.dummies) est.coef_names.push_back(d);

    Eigen::MatrixXd X(n, k_reg);
    Eigen::MatrixXd Y(n, K);
    est.row_entity.reserve(n);
    est.row_year.reserve(n);

    std::size_t row = 0;
    for (std::size_t ib = 0; ib < blocks.size(); ++ib) {
        const FrameView& f = blocks[ib].frame;
        const int t_i = static_cast<int>(f.rows());
        est.entities.push_back(f.entity);
        for (int t = p_lags + 1; t < t_i; ++t) {
            for (std::size_t v = 0; v < K; ++v) {
                Y(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(v)) =
                    f.columns[v][static_cast<std::size_t>(t)] - f.columns[v][static_cast<std::size_t>(t) - 1];
            }
            std::size_t c = 0;
            for (int j = 0; j < r; ++j) {
                X(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c++)) =
                    ect_cols[ib](t - 1, j);
            }
            for (std::size_t v = 0; v < K; ++v) {
                for (int l = 1; l <= p_lags; ++l) {
                    X(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c++)) =
                        f.columns[v][static_cast<std::size_t>(t - l)] -
                        f.columns[v][static_cast<std::size_t>(t - l) - 1];
                }
            }
            X(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c++)) = 1.0;
            for (std::size_t d = 0; d < n_dum; ++d) {
                X(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c++)) =
                    f.columns[K + d][static_cast<std::size_t>(t)];
            }
            est.row_entity.push_back(f.entity);
            est.row_year.push_back(f.first_year + t);
            ++row;
        }
    }

    // Only degenerate dummy columns may be dropped; everything else that is
    // collinear is a hard error from the solver.
    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < k_reg; ++c) {
        const bool is_dummy = c >= k_reg - n_dum;
        if (is_dummy && X.col(static_cast<Eigen::Index>(c)).norm() <
                            1e-10 * std::sqrt(static_cast<double>(n))) {
            est.dropped_regressors.push_back(est.coef_names[c]);
            est.notes.push_back("collinear: regressor '" + est.coef_names[c] +
                                "' has no variation and was dropped");
            continue;
        }
        kept.push_back(c);
    }
    if (!est.dropped_regressors.empty()) {
        std::vector<std::string> names;
        Eigen::MatrixXd Xk(n, kept.size());
        for (std::size_t c = 0; c < kept.size(); ++c) {
            Xk.col(static_cast<Eigen::Index>(c)) = X.col(static_cast<Eigen::Index>(kept[c]));
            names.push_back(est.coef_names[kept[c]]);
        }
        X = std::move(Xk);
        est.coef_names = std::move(names);
    }

    const std::size_t kk = static_cast<std::size_t>(X.cols());
    est.coefficients.resize(static_cast<Eigen::Index>(kk), static_cast<Eigen::Index>(K));
    est.std_errors.resize(static_cast<Eigen::Index>(kk), static_cast<Eigen::Index>(K));
    est.residuals.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(K));
    est.sigma2.resize(K);
    est.r_squared.resize(K);

    for (std::size_t eq = 0; eq < K; ++eq) {
        OlsFit fit = ols(Y.col(static_cast<Eigen::Index>(eq)), X);
        est.coefficients.col(static_cast<Eigen::Index>(eq)) = fit.coefficients;
        for (std::size_t c = 0; c < kk; ++c) {
            est.std_errors(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(eq)) =
                fit.std_error(static_cast<int>(c));
        }
        est.residuals.col(static_cast<Eigen::Index>(eq)) = fit.residuals;
        est.sigma2[eq] = fit.sigma2;
        est.r_squared[eq] = fit.r_squared;
        if (eq == 0) {
            est.xtx_inv = fit.covariance / fit.sigma2;
        }
    }
    est.X = std::move(X);
    est.sigma = est.residuals.transpose() * est.residuals / static_cast<double>(n);
    est.nobs = static_cast<int>(n);

    est.alpha = est.coefficients.topRows(r).transpose();  // K x r
    est.beta = beta_levels;                               // K x r
    return est;
}

}  // namespace

VecmEstimate estimate_vecm(const PanelDataset& p, const ModelSpec& spec,
                           const CointegratingVector& beta) {
    spec.validate();
    if (spec.rank != 1) {
        throw InvalidSpec("the two-step path estimates a single long-run relation (rank 1)");
    }
    if (beta.variables != spec.variables) {
        throw InvalidSpec("long-run relation was estimated on a different variable set");
    }

    const std::string ect_name = "ect";
    PanelDataset with_ect = build_ect(p, beta, ect_name);

    // Frames over endogenous + dummies + ect; keep the assembly layout of
    // gather_blocks (endogenous..., dummies...) and append ect last.
    std::vector<std::string> req = spec.required_variables();
    req.push_back(ect_name);

    std::vector<std::string> dropped;
    std::vector<EntityBlock> blocks;
    const std::size_t min_rows = static_cast<std::size_t>(spec.lag_order) + 3;
    for (const auto& entity : with_ect.entities()) {
        auto frame = entity_frame(with_ect, entity, req);
        if (!frame || frame->rows() < min_rows) {
            dropped.push_back(entity + ": aligned run of " +
                              std::to_string(frame ? frame->rows() : 0) + " < required " +
                              std::to_string(min_rows));
            continue;
        }
        blocks.push_back({std::move(*frame)});
    }
    if (blocks.size() < 2) {
        throw InsufficientData("short-run system needs at least 2 usable entities, has " +
                               std::to_string(blocks.size()));
    }

    const std::size_t K = spec.k();
    std::vector<Eigen::MatrixXd> ect_cols;
    for (auto& b : blocks) {
        const std::size_t t_i = b.frame.rows();
        Eigen::MatrixXd e(static_cast<Eigen::Index>(t_i), 1);
        for (std::size_t t = 0; t < t_i; ++t) {
            e(static_cast<Eigen::Index>(t), 0) = b.frame.columns.back()[t];
        }
        ect_cols.push_back(std::move(e));
        b.frame.columns.pop_back();  // leave endogenous + dummies for assembly
        b.frame.variables.pop_back();
    }

    Eigen::MatrixXd beta_levels(static_cast<Eigen::Index>(K), 1);
    beta_levels.col(0) = beta.normalized;

    VecmEstimate est = assemble_system(spec, blocks, ect_cols, std::move(dropped), "two_step",
                                       beta_levels);
    est.coint = beta;
    return est;
}

VecmEstimate johansen_vecm(const PanelDataset& p, const ModelSpec& spec) {
    spec.validate();
    const std::size_t K = spec.k();
    const int p_lags = spec.lag_order;
    const int r = spec.rank;
    const std::size_t n_dum = spec.dummies.size();

    std::vector<std::string> dropped;
    const std::size_t min_rows = static_cast<std::size_t>(p_lags) + 4;
    std::vector<EntityBlock> blocks = gather_blocks(p, spec, min_rows, &dropped);
    if (blocks.size() < 2) {
        throw InsufficientData("reduced-rank estimation needs at least 2 usable entities, has " +
                               std::to_string(blocks.size()));
    }

    // Entity-demeaned levels (fixed effects absorbed before the eigenproblem).
    std::vector<Eigen::MatrixXd> demeaned;  // per block: rows x K
    std::vector<Eigen::VectorXd> level_means;
    std::size_t n = 0;
    for (const auto& b : blocks) {
        const std::size_t t_i = b.frame.rows();
        Eigen::MatrixXd ylv(static_cast<Eigen::Index>(t_i), static_cast<Eigen::Index>(K));
        for (std::size_t v = 0; v < K; ++v) {
            for (std::size_t t = 0; t < t_i; ++t) {
                ylv(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(v)) = b.frame.columns[v][t];
            }
        }
        Eigen::VectorXd mean = ylv.colwise().mean();
        ylv.rowwise() -= mean.transpose();
        demeaned.push_back(std::move(ylv));
        level_means.push_back(std::move(mean));
        n += t_i - 1 - static_cast<std::size_t>(p_lags);
    }

    // Stacked concentrated regressions: dY and demeaned Y_{t-1} on the
    // short-run design W = [dY lags, 1, dummies].
    const std::size_t kw = K * static_cast<std::size_t>(p_lags) + 1 + n_dum;
    Eigen::MatrixXd dY(n, K), Y1(n, K), W(n, kw);
    std::size_t row = 0;
    for (std::size_t ib = 0; ib < blocks.size(); ++ib) {
        const FrameView& f = blocks[ib].frame;
        const Eigen::MatrixXd& ylv = demeaned[ib];
        const int t_i = static_cast<int>(f.rows());
        for (int t = p_lags + 1; t < t_i; ++t) {
            for (std::size_t v = 0; v < K; ++v) {
                dY(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(v)) =
                    ylv(t, static_cast<Eigen::Index>(v)) - ylv(t - 1, static_cast<Eigen::Index>(v));
                Y1(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(v)) =
                    ylv(t - 1, static_cast<Eigen::Index>(v));
            }
            std::size_t c = 0;
            for (std::size_t v = 0; v < K; ++v) {
                for (int l = 1; l <= p_lags; ++l) {
                    W(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c++)) =
                        ylv(t - l, static_cast<Eigen::Index>(v)) - ylv(t - l - 1, static_cast<Eigen::Index>(v));
                }
            }
            W(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c++)) = 1.0;
            for (std::size_t d = 0; d < n_dum; ++d) {
                W(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c++)) =
                    f.columns[K + d][static_cast<std::size_t>(t)];
            }
            ++row;
        }
    }

    // Partial out W. Degenerate dummy columns are removed silently here; the
    // assembly step reports them.
    Eigen::MatrixXd Wk = W;
    {
        std::vector<Eigen::Index> keep;
        for (Eigen::Index c = 0; c < W.cols(); ++c) {
            if (W.col(c).norm() >= 1e-10 * std::sqrt(static_cast<double>(n))) keep.push_back(c);
        }
        if (keep.size() != static_cast<std::size_t>(W.cols())) {
            Wk.resize(W.rows(), static_cast<Eigen::Index>(keep.size()));
            for (std::size_t c = 0; c < keep.size(); ++c) Wk.col(static_cast<Eigen::Index>(c)) = W.col(keep[c]);
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> wqr(Wk);
    Eigen::MatrixXd R0 = dY - Wk * wqr.solve(dY);
    Eigen::MatrixXd R1 = Y1 - Wk * wqr.solve(Y1);

    const double dn = static_cast<double>(n);
    Eigen::MatrixXd S00 = R0.transpose() * R0 / dn;
    Eigen::MatrixXd S11 = R1.transpose() * R1 / dn;
    Eigen::MatrixXd S01 = R0.transpose() * R1 / dn;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s11_eig(S11);
    if (s11_eig.info() != Eigen::Success || s11_eig.eigenvalues().minCoeff() <= 1e-14) {
        throw NumericError("level moment matrix is numerically singular in the reduced-rank step");
    }
    Eigen::MatrixXd s11_half_inv =
        s11_eig.eigenvectors() * s11_eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
        s11_eig.eigenvectors().transpose();
    Eigen::LLT<Eigen::MatrixXd> s00_llt(S00);
    if (s00_llt.info() != Eigen::Success) {
        throw NumericError("difference moment matrix is not positive definite in the reduced-rank step");
    }
    Eigen::MatrixXd mid = S01.transpose() * s00_llt.solve(S01);  // S10 S00^{-1} S01
    Eigen::MatrixXd M = s11_half_inv * mid * s11_half_inv;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> m_eig(M);
    if (m_eig.info() != Eigen::Success) throw NumericError("reduced-rank eigenproblem failed");

    // Eigenvalues ascending in Eigen: take the largest r.
    Eigen::MatrixXd beta_raw(static_cast<Eigen::Index>(K), r);
    for (int j = 0; j < r; ++j) {
        beta_raw.col(j) = s11_half_inv * m_eig.eigenvectors().col(static_cast<Eigen::Index>(K) - 1 - j);
    }
    // c-normalization on the leading r x r block.
    Eigen::MatrixXd head = beta_raw.topRows(r);
    Eigen::FullPivLU<Eigen::MatrixXd> head_lu(head);
    if (!head_lu.isInvertible()) {
        throw NumericError("long-run matrix cannot be normalized on the leading block");
    }
    Eigen::MatrixXd beta_n = beta_raw * head_lu.inverse();

    // Error-correction columns per block from the demeaned levels.
    std::vector<Eigen::MatrixXd> ect_cols;
    for (std::size_t ib = 0; ib < blocks.size(); ++ib) {
        ect_cols.push_back(demeaned[ib] * beta_n);
    }

    VecmEstimate est = assemble_system(spec, blocks, ect_cols, std::move(dropped), "johansen",
                                       beta_n);

    // Display-form relation (first column) with observed-information
    // standard errors for the free coefficients.
    CointegratingVector cv;
    cv.variables = spec.variables;
    cv.dummies = spec.dummies;
    cv.method = "johansen";
    cv.nobs = static_cast<int>(n);
    cv.normalized = beta_n.col(0);
    cv.normalized_t.resize(static_cast<Eigen::Index>(K));
    cv.normalized_t.setConstant(kNaN);
    cv.regression_slopes = -beta_n.col(0).tail(static_cast<Eigen::Index>(K) - 1);
    cv.regression_se.resize(static_cast<Eigen::Index>(K) - 1);
    cv.regression_se.setConstant(kNaN);
    cv.dummy_coefs.assign(n_dum, 0.0);
    cv.dummy_se_hac.assign(n_dum, kNaN);
    cv.dummy_t_hac.assign(n_dum, kNaN);
    cv.dummy_p_hac.assign(n_dum, kNaN);
    cv.dummy_dropped.assign(n_dum, false);
    if (n_dum > 0) {
        cv.notes.push_back("dummies enter the short-run design unrestricted under the reduced-rank path");
    }

    if (r == 1) {
        Eigen::MatrixXd alpha_ml = S01 * beta_n * (beta_n.transpose() * S11 * beta_n).inverse();
        Eigen::MatrixXd omega = S00 - alpha_ml * (beta_n.transpose() * S11 * beta_n) * alpha_ml.transpose();
        Eigen::LLT<Eigen::MatrixXd> om_llt(omega);
        if (om_llt.info() == Eigen::Success) {
            const double a_om_a = (alpha_ml.transpose() * om_llt.solve(alpha_ml))(0, 0);
            Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K),
                                                      static_cast<Eigen::Index>(K) - 1);
            B.bottomRows(static_cast<Eigen::Index>(K) - 1).setIdentity();
            Eigen::MatrixXd s11b = S11 * beta_n;
            Eigen::MatrixXd proj = S11 - s11b * (beta_n.transpose() * s11b).inverse() * s11b.transpose();
            Eigen::MatrixXd inner = B.transpose() * proj * B;
            Eigen::LLT<Eigen::MatrixXd> in_llt(inner);
            if (in_llt.info() == Eigen::Success) {
                Eigen::MatrixXd var_free =
                    in_llt.solve(Eigen::MatrixXd::Identity(inner.rows(), inner.cols())) /
                    (a_om_a * dn);
                for (std::size_t j = 1; j < K; ++j) {
                    const double se = std::sqrt(std::max(var_free(static_cast<Eigen::Index>(j - 1),
                                                                  static_cast<Eigen::Index>(j - 1)),
                                                         0.0));
                    cv.regression_se(static_cast<Eigen::Index>(j - 1)) = se;
                    cv.normalized_t(static_cast<Eigen::Index>(j)) =
                        cv.normalized(static_cast<Eigen::Index>(j)) / se;
                }
            }
        }
    }

    // Regression-form intercepts so that build_ect reproduces the demeaned
    // relation: c_i = beta' mean_i(Y).
    for (std::size_t ib = 0; ib < blocks.size(); ++ib) {
        cv.entities.push_back(blocks[ib].frame.entity);
        cv.entity_intercepts.push_back(beta_n.col(0).dot(level_means[ib]));
    }
    cv.constant = std::accumulate(cv.entity_intercepts.begin(), cv.entity_intercepts.end(), 0.0) /
                  static_cast<double>(cv.entity_intercepts.size());

    est.coint = std::move(cv);
    return est;
}

std::vector<Eigen::MatrixXd> to_levels_var(const VecmEstimate& est) {
    const std::size_t K = est.k();
    const int p_lags = est.spec.lag_order;
    const int r = est.ect_terms();
    if (est.coefficients.rows() < r + static_cast<int>(K) * p_lags + 1) {
        throw ShapeMismatch("estimate does not contain the full short-run coefficient block");
    }

    Eigen::MatrixXd pi = est.alpha * est.beta.transpose();  // K x K long-run impact

    std::vector<Eigen::MatrixXd> gamma(static_cast<std::size_t>(p_lags));
    for (int l = 1; l <= p_lags; ++l) {
        Eigen::MatrixXd g(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
        for (std::size_t i = 0; i < K; ++i) {      // equation
            for (std::size_t j = 0; j < K; ++j) {  // lagged variable
                const Eigen::Index idx =
                    r + static_cast<Eigen::Index>(j) * p_lags + (l - 1);
                g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    est.coefficients(idx, static_cast<Eigen::Index>(i));
            }
        }
        gamma[static_cast<std::size_t>(l - 1)] = std::move(g);
    }

    std::vector<Eigen::MatrixXd> A(static_cast<std::size_t>(p_lags) + 1);
    A[0] = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K)) +
           pi + gamma[0];
    for (int j = 2; j <= p_lags; ++j) {
        A[static_cast<std::size_t>(j - 1)] =
            gamma[static_cast<std::size_t>(j - 1)] - gamma[static_cast<std::size_t>(j - 2)];
    }
    A[static_cast<std::size_t>(p_lags)] = -gamma[static_cast<std::size_t>(p_lags - 1)];
    return A;
}

}  // namespace panelbreak
