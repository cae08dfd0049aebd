#include "panelbreak/diagnostics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "panelbreak/errors.hpp"
#include "panelbreak/stats.hpp"

namespace panelbreak {

namespace {

// Minimal fit facade so the shared Wald helper can run off the stored
// system matrices.
OlsFit equation_fit(const VecmEstimate& est, std::size_t eq) {
    OlsFit f;
    f.coefficients = est.coefficients.col(static_cast<Eigen::Index>(eq));
    f.covariance = est.sigma2[eq] * est.xtx_inv;
    f.nobs = est.nobs;
    f.df_resid = est.nobs - static_cast<int>(est.coefficients.rows());
    f.sigma2 = est.sigma2[eq];
    return f;
}

// Contiguous stacked-row ranges per entity, in stacking order.
std::vector<std::pair<std::size_t, std::size_t>> entity_ranges(const VecmEstimate& est) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t start = 0;
    for (std::size_t r = 1; r <= est.row_entity.size(); ++r) {
        if (r == est.row_entity.size() || est.row_entity[r] != est.row_entity[start]) {
            out.emplace_back(start, r);
            start = r;
        }
    }
    return out;
}

struct MultivariateLm {
    double lm = 0.0, lm_p = 1.0;
    double lre = 0.0, lre_p = 1.0;
    double rao = 0.0, rao_p = 1.0;
    double df = 0.0;        // chi-square df (p*q)
    double rao_df2 = 0.0;   // F denominator df
};

// Shared multivariate LM machinery: residual matrix U regressed on the
// restricted design Xr versus [Xr, Z].
MultivariateLm multivariate_lm(const Eigen::MatrixXd& U, const Eigen::MatrixXd& Xr,
                               const Eigen::MatrixXd& Z) {
    const Eigen::Index n = U.rows();
    const Eigen::Index p = U.cols();
    const Eigen::Index q = Z.cols();

    Eigen::MatrixXd Xu(n, Xr.cols() + q);
    Xu << Xr, Z;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_r(Xr);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_u(Xu);
    Eigen::MatrixXd Er_res = U - Xr * qr_r.solve(U);
    Eigen::MatrixXd Eu_res = U - Xu * qr_u.solve(U);
    Eigen::MatrixXd Er = Er_res.transpose() * Er_res;
    Eigen::MatrixXd Eu = Eu_res.transpose() * Eu_res;

    Eigen::PartialPivLU<Eigen::MatrixXd> er_lu(Er);
    const double dn = static_cast<double>(n);

    MultivariateLm out;
    out.df = static_cast<double>(p) * static_cast<double>(q);
    out.lm = dn * (static_cast<double>(p) - er_lu.solve(Eu).trace());
    out.lm = std::max(out.lm, 0.0);
    out.lm_p = stats::chi2_sf(out.lm, out.df);

    // Wilks lambda through the same solve; clamped into (0, 1].
    const double lambda = std::clamp(er_lu.solve(Eu).determinant(), 1e-300, 1.0);

    const double pp = static_cast<double>(p), qq = static_cast<double>(q);
    const double v = dn - static_cast<double>(Xu.cols());
    const double r_coef = v - (pp - qq + 1.0) / 2.0;
    const double u_coef = (pp * qq - 2.0) / 4.0;
    const double s_den = pp * pp + qq * qq - 5.0;
    const double s_coef = s_den > 0.0 ? std::sqrt((pp * pp * qq * qq - 4.0) / s_den) : 1.0;

    out.lre = std::max(-r_coef * std::log(lambda), 0.0);
    out.lre_p = stats::chi2_sf(out.lre, out.df);

    out.rao_df2 = r_coef * s_coef - 2.0 * u_coef;
    const double lam_pow = std::pow(lambda, 1.0 / s_coef);
    if (out.rao_df2 > 0.0 && lam_pow > 0.0) {
        out.rao = (1.0 - lam_pow) / lam_pow * out.rao_df2 / (pp * qq);
        out.rao = std::max(out.rao, 0.0);
        out.rao_p = stats::f_sf(out.rao, out.df, out.rao_df2);
    } else {
        out.rao = 0.0;
        out.rao_p = 1.0;
    }
    return out;
}

}  // namespace

std::vector<TestReport> granger_block_exogeneity(const VecmEstimate& est,
                                                 const std::string& target) {
    const std::size_t K = est.k();
    const int p_lags = est.spec.lag_order;
    if (p_lags < 1) throw InvalidSpec("block-exogeneity test needs at least one lag");
    const auto it = std::find(est.spec.variables.begin(), est.spec.variables.end(), target);
    if (it == est.spec.variables.end()) throw UnknownVariable("unknown target variable '" + target + "'");
    const std::size_t eq = static_cast<std::size_t>(it - est.spec.variables.begin());
    const int r = est.ect_terms();
    const Eigen::Index k_reg = est.coefficients.rows();

    OlsFit fit = equation_fit(est, eq);

    std::vector<TestReport> out;
    std::vector<Eigen::Index> all_rows;
    for (std::size_t j = 0; j < K; ++j) {
        if (j == eq) continue;
        Eigen::MatrixXd R = Eigen::MatrixXd::Zero(p_lags, k_reg);
        for (int l = 0; l < p_lags; ++l) {
            const Eigen::Index idx = r + static_cast<Eigen::Index>(j) * p_lags + l;
            R(l, idx) = 1.0;
            all_rows.push_back(idx);
        }
        TestReport t = wald(fit, R, Eigen::VectorXd::Zero(p_lags));
        t.name = "D(" + est.spec.variables[j] + ")";
        t.reject_5pct = t.p_value < 0.05;
        out.push_back(std::move(t));
    }

    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(all_rows.size()), k_reg);
    for (std::size_t i = 0; i < all_rows.size(); ++i) {
        R(static_cast<Eigen::Index>(i), all_rows[i]) = 1.0;
    }
    TestReport joint = wald(fit, R, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(all_rows.size())));
    joint.name = "All";
    joint.reject_5pct = joint.p_value < 0.05;
    out.push_back(std::move(joint));
    return out;
}

std::vector<TestReport> serial_correlation_lm(const VecmEstimate& est, int max_lag) {
    if (max_lag < 1) throw InvalidSpec("serial-correlation battery needs max_lag >= 1");
    const std::size_t K = est.k();
    const auto ranges = entity_ranges(est);

    auto run_variant = [&](int h, bool cumulative) -> TestReport {
        const int m_lags = cumulative ? h : 1;  // residual-lag blocks appended
        // Usable rows: skip the first h observations of every entity.
        std::vector<std::size_t> rows;
        for (const auto& [start, end] : ranges) {
            for (std::size_t t = start + static_cast<std::size_t>(h); t < end; ++t) rows.push_back(t);
        }
        const std::size_t q_cols = static_cast<std::size_t>(m_lags) * K;
        const std::size_t k_u = static_cast<std::size_t>(est.X.cols()) + q_cols;
        if (rows.size() <= k_u + K) {
            throw SeriesTooShort("serial-correlation variant at lag " + std::to_string(h) +
                                 " has too few stacked observations");
        }

        Eigen::MatrixXd U(rows.size(), K), Xr(rows.size(), est.X.cols()), Z(rows.size(), q_cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Eigen::Index src = static_cast<Eigen::Index>(rows[i]);
            U.row(static_cast<Eigen::Index>(i)) = est.residuals.row(src);
            Xr.row(static_cast<Eigen::Index>(i)) = est.X.row(src);
            std::size_t c = 0;
            if (cumulative) {
                for (int l = 1; l <= h; ++l) {
                    for (std::size_t v = 0; v < K; ++v) {
                        Z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c++)) =
                            est.residuals(src - l, static_cast<Eigen::Index>(v));
                    }
                }
            } else {
                for (std::size_t v = 0; v < K; ++v) {
                    Z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c++)) =
                        est.residuals(src - h, static_cast<Eigen::Index>(v));
                }
            }
        }

        MultivariateLm lm = multivariate_lm(U, Xr, Z);

        TestReport t;
        t.name = cumulative ? "no serial correlation at lags 1 to " + std::to_string(h)
                            : "no serial correlation at lag " + std::to_string(h);
        t.statistic = lm.lre;
        t.distribution = {Distribution::Kind::chi_square, lm.df, 0.0};
        t.p_value = lm.lre_p;
        t.reject_5pct = t.p_value < 0.05;
        t.component_columns = {"statistic", "df1", "df2", "p"};
        t.components.push_back({"lm", {lm.lm, lm.df, 0.0, lm.lm_p}});
        t.components.push_back({"lre", {lm.lre, lm.df, 0.0, lm.lre_p}});
        t.components.push_back({"rao_f", {lm.rao, lm.df, lm.rao_df2, lm.rao_p}});
        return t;
    };

    std::vector<TestReport> out;
    for (int h = 1; h <= max_lag; ++h) out.push_back(run_variant(h, false));
    for (int h = 1; h <= max_lag; ++h) out.push_back(run_variant(h, true));
    return out;
}

TestReport heteroskedasticity_white(const VecmEstimate& est, bool cross_terms) {
    const std::size_t K = est.k();
    const Eigen::Index n = est.residuals.rows();

    // Equation regressors excluding the constant.
    std::vector<Eigen::Index> base_cols;
    for (std::size_t c = 0; c < est.coef_names.size(); ++c) {
        if (est.coef_names[c] != "C") base_cols.push_back(static_cast<Eigen::Index>(c));
    }

    // Candidate auxiliary columns: levels, squares, pairwise products.
    std::vector<Eigen::VectorXd> candidates;
    std::vector<std::string> cand_names;
    for (Eigen::Index c : base_cols) {
        candidates.push_back(est.X.col(c));
        cand_names.push_back(est.coef_names[static_cast<std::size_t>(c)]);
    }
    for (Eigen::Index c : base_cols) {
        candidates.push_back(est.X.col(c).array().square().matrix());
        cand_names.push_back(est.coef_names[static_cast<std::size_t>(c)] + "^2");
    }
    if (cross_terms) {
        for (std::size_t a = 0; a < base_cols.size(); ++a) {
            for (std::size_t b = a + 1; b < base_cols.size(); ++b) {
                candidates.push_back(
                    (est.X.col(base_cols[a]).array() * est.X.col(base_cols[b]).array()).matrix());
                cand_names.push_back(est.coef_names[static_cast<std::size_t>(base_cols[a])] + "*" +
                                     est.coef_names[static_cast<std::size_t>(base_cols[b])]);
            }
        }
    }

    // Greedy orthogonal screen against the constant and already-kept
    // columns; duplicates such as squared 0/1 regressors drop out here.
    std::vector<std::string> dropped;
    Eigen::MatrixXd kept(n, candidates.size() + 1);
    kept.col(0).setOnes();
    Eigen::MatrixXd orth(n, candidates.size() + 1);
    orth.col(0) = kept.col(0) / kept.col(0).norm();
    Eigen::Index nk = 1;
    std::vector<std::string> kept_names;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        Eigen::VectorXd v = candidates[i];
        const double scale = std::max(v.norm(), 1e-300);
        for (Eigen::Index j = 0; j < nk; ++j) {
            v -= orth.col(j).dot(v) * orth.col(j);
        }
        // re-orthogonalize once for numerical safety
        for (Eigen::Index j = 0; j < nk; ++j) {
            v -= orth.col(j).dot(v) * orth.col(j);
        }
        if (v.norm() < 1e-8 * scale) {
            dropped.push_back(cand_names[i]);
            continue;
        }
        kept.col(nk) = candidates[i];
        orth.col(nk) = v / v.norm();
        kept_names.push_back(cand_names[i]);
        ++nk;
    }
    Eigen::MatrixXd aux = kept.leftCols(nk);
    const Eigen::Index d = nk - 1;  // non-constant auxiliary regressors
    if (d < 1) throw RankDeficient("auxiliary heteroskedasticity design has no usable regressors");
    if (n <= nk + 1) {
        throw InsufficientData("too few stacked observations for the auxiliary design");
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> aux_qr(aux);

    TestReport t;
    t.name = "joint";
    t.component_columns = {"chi_sq", "df", "p", "r_squared", "f_stat", "f_df2", "f_p"};

    // Component order: diagonals first, then the lower triangle row-wise.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < K; ++i) pairs.emplace_back(i, i);
    for (std::size_t i = 1; i < K; ++i) {
        for (std::size_t j = 0; j < i; ++j) pairs.emplace_back(i, j);
    }

    Eigen::MatrixXd Wmat(n, pairs.size());
    for (std::size_t c = 0; c < pairs.size(); ++c) {
        Wmat.col(static_cast<Eigen::Index>(c)) =
            (est.residuals.col(static_cast<Eigen::Index>(pairs[c].first)).array() *
             est.residuals.col(static_cast<Eigen::Index>(pairs[c].second)).array())
                .matrix();
    }

    const double dn = static_cast<double>(n);
    for (std::size_t c = 0; c < pairs.size(); ++c) {
        Eigen::VectorXd w = Wmat.col(static_cast<Eigen::Index>(c));
        Eigen::VectorXd resid = w - aux * aux_qr.solve(w);
        const double wmean = w.mean();
        const double tss = (w.array() - wmean).square().sum();
        const double r2 = tss > 0.0 ? std::clamp(1.0 - resid.squaredNorm() / tss, 0.0, 1.0) : 0.0;
        const double chi = dn * r2;
        const double df = static_cast<double>(d);
        const double p = stats::chi2_sf(chi, df);
        const double fden = dn - static_cast<double>(d) - 1.0;
        const double f = r2 < 1.0 ? (r2 / (1.0 - r2)) * (fden / df) : 0.0;
        const double fp = r2 < 1.0 ? stats::f_sf(f, df, fden) : 0.0;
        t.components.push_back({"res" + std::to_string(pairs[c].first + 1) + "*res" +
                                    std::to_string(pairs[c].second + 1),
                                {chi, df, p, r2, f, fden, fp}});
    }

    // Joint system statistic: multivariate LM of all residual products on
    // the auxiliary design versus the constant alone.
    MultivariateLm lm = multivariate_lm(Wmat, aux.leftCols(1), aux.rightCols(d));
    t.statistic = lm.lm;
    t.distribution = {Distribution::Kind::chi_square, lm.df, 0.0};
    t.p_value = lm.lm_p;
    t.reject_5pct = t.p_value < 0.05;
    for (const auto& name : dropped) {
        t.components.push_back({"dropped:" + name, {}});
    }
    return t;
}

TestReport slope_homogeneity(const PanelDataset& p, const ModelSpec& spec, bool two_sided) {
    spec.validate();
    const std::vector<std::string> req = spec.required_variables();
    const std::size_t kx = req.size() - 1;  // slopes tested for dispersion

    struct EntityData {
        Eigen::MatrixXd x;  // demeaned
        Eigen::VectorXd y;  // demeaned
    };
    std::vector<EntityData> data;
    std::vector<std::string> dropped;
    int min_t = 0;
    for (const auto& entity : p.entities()) {
        auto frame = entity_frame(p, entity, req);
        const std::size_t t_i = frame ? frame->rows() : 0;
        if (!frame || t_i <= kx + 2) {
            dropped.push_back(entity + ": usable run " + std::to_string(t_i) +
                              " <= k + 2 = " + std::to_string(kx + 2));
            continue;
        }
        EntityData d;
        d.y.resize(static_cast<Eigen::Index>(t_i));
        d.x.resize(static_cast<Eigen::Index>(t_i), static_cast<Eigen::Index>(kx));
        for (std::size_t t = 0; t < t_i; ++t) {
            d.y(static_cast<Eigen::Index>(t)) = frame->columns[0][t];
            for (std::size_t j = 0; j < kx; ++j) {
                d.x(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
                    frame->columns[j + 1][t];
            }
        }
        d.y.array() -= d.y.mean();
        d.x.rowwise() -= d.x.colwise().mean();
        data.push_back(std::move(d));
        min_t = min_t == 0 ? static_cast<int>(t_i) : std::min(min_t, static_cast<int>(t_i));
    }
    if (data.size() < 5) {
        throw InsufficientEntities("slope-dispersion test needs at least 5 usable entities, has " +
                                   std::to_string(data.size()));
    }
    const double N = static_cast<double>(data.size());
    const double k = static_cast<double>(kx);

    // Pooled fixed-effect slopes (unweighted).
    Eigen::MatrixXd sxx = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kx),
                                                static_cast<Eigen::Index>(kx));
    Eigen::VectorXd sxy = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kx));
    for (const auto& d : data) {
        sxx += d.x.transpose() * d.x;
        sxy += d.x.transpose() * d.y;
    }
    Eigen::LDLT<Eigen::MatrixXd> sxx_ldlt(sxx);
    if (sxx_ldlt.info() != Eigen::Success) throw RankDeficient("pooled moment matrix is singular");
    Eigen::VectorXd beta_fe = sxx_ldlt.solve(sxy);

    // Per-entity variances around the pooled estimator, then the weighted
    // pooled estimator.
    std::vector<double> sig2(data.size());
    Eigen::MatrixXd wxx = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kx),
                                                static_cast<Eigen::Index>(kx));
    Eigen::VectorXd wxy = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kx));
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& d = data[i];
        Eigen::VectorXd r = d.y - d.x * beta_fe;
        sig2[i] = r.squaredNorm() / (static_cast<double>(d.y.size()) - 1.0);
        if (sig2[i] <= 0.0) throw NumericError("degenerate per-entity variance in slope test");
        wxx += d.x.transpose() * d.x / sig2[i];
        wxy += d.x.transpose() * d.y / sig2[i];
    }
    Eigen::LDLT<Eigen::MatrixXd> wxx_ldlt(wxx);
    if (wxx_ldlt.info() != Eigen::Success) throw RankDeficient("weighted moment matrix is singular");
    Eigen::VectorXd beta_w = wxx_ldlt.solve(wxy);

    double s_tilde = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& d = data[i];
        Eigen::LDLT<Eigen::MatrixXd> xi(d.x.transpose() * d.x);
        if (xi.info() != Eigen::Success) throw RankDeficient("per-entity moment matrix is singular");
        Eigen::VectorXd bi = xi.solve(d.x.transpose() * d.y);
        Eigen::VectorXd diff = bi - beta_w;
        s_tilde += diff.dot((d.x.transpose() * d.x) * diff) / sig2[i];
    }

    const double t_min = static_cast<double>(min_t);
    const double delta = std::sqrt(N) * (s_tilde / N - k) / std::sqrt(2.0 * k);
    const double var_adj = 2.0 * k * (t_min - k - 1.0) / (t_min + 1.0);
    const double delta_adj = std::sqrt(N) * (s_tilde / N - k) / std::sqrt(var_adj);

    auto pv = [two_sided](double z) {
        return two_sided ? 2.0 * stats::normal_sf(std::abs(z)) : stats::normal_sf(z);
    };

    TestReport t;
    t.name = "slope homogeneity";
    t.statistic = delta_adj;
    t.distribution = {Distribution::Kind::normal, 0.0, 0.0};
    t.p_value = pv(delta_adj);
    t.reject_5pct = t.p_value < 0.05;
    t.component_columns = {"statistic", "p"};
    t.components.push_back({"delta_tilde", {delta, pv(delta)}});
    t.components.push_back({"delta_tilde_adj", {delta_adj, pv(delta_adj)}});
    for (const auto& d : dropped) t.components.push_back({"dropped:" + d, {}});
    return t;
}

}  // namespace panelbreak
