#include "panelbreak/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "panelbreak/cointegration.hpp"
#include "panelbreak/diagnostics.hpp"
#include "panelbreak/dynamics.hpp"
#include "panelbreak/errors.hpp"
#include "panelbreak/unit_root.hpp"
#include "panelbreak/vecm.hpp"

namespace panelbreak {

using stats::Deterministic;

namespace {

const std::vector<std::string> kCanonical = {"co2", "energy", "gdp", "pop"};

std::string display_name(const std::string& canonical) {
    if (canonical == "co2") return "CO2";
    if (canonical == "energy") return "Energy use";
    if (canonical == "gdp") return "GDP";
    if (canonical == "pop") return "Population";
    return canonical;
}

// Rewrite canonical variable names inside composite labels such as
// "D(co2(-1))" into their display form.
std::string prettify(std::string label) {
    for (const std::string& canon : kCanonical) {
        const std::string disp = display_name(canon);
        std::size_t pos = 0;
        while ((pos = label.find(canon, pos)) != std::string::npos) {
            label.replace(pos, canon.size(), disp);
            pos += disp.size();
        }
    }
    return label;
}

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

Cell numeric_or_blank(Cell c) {
    if (c.kind != Cell::Kind::text && c.kind != Cell::Kind::blank && !std::isfinite(c.value)) {
        return cell_blank();
    }
    return c;
}

PanelDataset restrict_years(const PanelDataset& p, int y0, int y1, const PanelOptions& options) {
    const int from = std::max(y0, p.year_start());
    const int to = std::min(y1, p.year_end());
    std::vector<Observation> obs;
    for (std::size_t e = 0; e < p.n_entities(); ++e) {
        for (int year = from; year <= to; ++year) {
            for (std::size_t v = 0; v < p.variables().size(); ++v) {
                if (p.observed(e, year, v)) {
                    obs.push_back({p.entities()[e], year, p.variables()[v], p.value(e, year, v)});
                }
            }
        }
    }
    if (obs.empty()) {
        throw InsufficientData("configured year range [" + std::to_string(y0) + ", " +
                               std::to_string(y1) + "] contains no observations");
    }
    return PanelDataset::from_observations(p.variables(), obs, options);
}

void append_unique(std::vector<std::string>& notes, std::set<std::string>& seen,
                   const std::string& prefix, const std::vector<std::string>& extra) {
    for (const std::string& line : extra) {
        if (seen.insert(prefix + line).second) notes.push_back(prefix + line);
    }
}

std::string pedroni_display(PedroniStat s) {
    switch (s) {
        case PedroniStat::panel_v: return "Panel v-Statistic";
        case PedroniStat::panel_rho: return "Panel rho-Statistic";
        case PedroniStat::panel_pp: return "Panel PP-Statistic";
        case PedroniStat::panel_adf: return "Panel ADF-Statistic";
        case PedroniStat::group_rho: return "Group rho-Statistic";
        case PedroniStat::group_pp: return "Group PP-Statistic";
        case PedroniStat::group_adf: return "Group ADF-Statistic";
    }
    return "?";
}

}  // namespace

ReportBundle run_pipeline(const RunConfig& cfg, Stage up_to) {
    ReportBundle bundle;
    bundle.config = cfg;

    std::vector<std::string> context;  // decision lines accumulated across stages
    std::set<std::string> seen_notes;
    std::string current_stage = "ingest";
    const auto reached = [&](Stage s) { return static_cast<int>(up_to) >= static_cast<int>(s); };

    // Filled along the way for the summary table.
    std::map<std::string, std::string> summary;
    summary["status"] = "ok";

    try {
        validate_config(cfg);

        // ------------------------------------------------------------------
        // Ingest: parse, year window, log transforms, policy indicator.
        // ------------------------------------------------------------------
        std::map<std::string, std::string> file_to_canonical;
        for (const auto& [canon, file_name] : cfg.variable_map) {
            if (!file_to_canonical.emplace(file_name, canon).second) {
                throw InvalidSpec("config: two canonical variables map to input name '" +
                                  file_name + "'");
            }
        }
        PanelOptions options;
        options.min_obs = cfg.min_obs;
        options.gating_variables = kCanonical;

        PanelDataset panel = parse_long_csv(cfg.input, file_to_canonical, options);
        for (const std::string& canon : kCanonical) {
            if (!panel.has_variable(canon)) {
                throw InvalidSpec("input provides no observations for canonical variable '" +
                                  canon + "'");
            }
        }
        if (cfg.year_start != 0) {
            panel = restrict_years(panel, cfg.year_start, cfg.year_end, options);
        }
        std::vector<std::string> logged;
        for (const std::string& canon : kCanonical) {
            const auto it = cfg.log_flags.find(canon);
            if (it != cfg.log_flags.end() && it->second) {
                panel = panel.with_log_variable(canon);
                logged.push_back(canon);
            }
        }
        panel = build_policy_dummy(panel, cfg.dummy_name, cfg.dummy_threshold_year);
        append_unique(bundle.notes, seen_notes, "ingest: ", panel.notes());

        context.push_back("sample: " + std::to_string(panel.n_entities()) + " entities, years " +
                          std::to_string(panel.year_start()) + "-" +
                          std::to_string(panel.year_end()));
        if (!logged.empty()) {
            std::string line = "log transform applied to:";
            for (const auto& v : logged) line += " " + v;
            context.push_back(line);
        }
        context.push_back("policy indicator '" + cfg.dummy_name + "' switches on in " +
                          std::to_string(cfg.dummy_threshold_year));
        summary["entities"] = std::to_string(panel.n_entities());
        summary["years"] = std::to_string(panel.year_start()) + "-" +
                           std::to_string(panel.year_end());

        // ------------------------------------------------------------------
        // Stage 1: panel unit-root battery.
        // ------------------------------------------------------------------
        current_stage = "unitroot";
        {
            ReportTable t;
            t.id = "table2_panel_unit_root";
            t.title = "Panel unit-root tests";
            t.module = "unit_root";
            t.columns = {"variable", "method", "level_statistic", "level_p",
                         "first_diff_statistic", "first_diff_p"};
            t.context = context;
            t.context.push_back("level deterministic: " +
                                stats::to_string(cfg.deterministic_levels) +
                                "; difference deterministic: constant");

            struct MethodEntry {
                UnitRootMethod method;
                const char* label;
                UnitRootResult (*fn)(const PanelDataset&, const std::string&, bool, Deterministic);
            };
            const MethodEntry methods[] = {
                {UnitRootMethod::LLC, "LLC", &llc_test},
                {UnitRootMethod::IPS, "IPS", &ips_test},
                {UnitRootMethod::ADF_FISHER, "ADF-Fisher", &adf_fisher_test},
                {UnitRootMethod::PP_FISHER, "PP-Fisher", &pp_fisher_test},
            };

            std::vector<std::string> verdicts;
            for (const std::string& var : kCanonical) {
                int level_rej = 0, diff_rej = 0;
                for (const auto& m : methods) {
                    const UnitRootResult level = m.fn(panel, var, false, cfg.deterministic_levels);
                    const UnitRootResult diff = m.fn(panel, var, true, Deterministic::constant);
                    level_rej += level.p_value < 0.05 ? 1 : 0;
                    diff_rej += diff.p_value < 0.05 ? 1 : 0;
                    t.rows.push_back({cell_text(display_name(var)),
                                      cell_text(m.label), cell_stat(level.statistic),
                                      cell_pval(level.p_value), cell_stat(diff.statistic),
                                      cell_pval(diff.p_value)});
                    append_unique(bundle.notes, seen_notes, "unitroot " + var + ": ",
                                  level.dropped);
                    append_unique(bundle.notes, seen_notes, "unitroot d(" + var + "): ",
                                  diff.dropped);
                }
                std::string verdict;
                if (level_rej >= 3) {
                    verdict = "stationary in levels";
                } else if (diff_rej >= 3) {
                    verdict = "I(1)";
                } else {
                    verdict = "ambiguous";
                }
                verdicts.push_back(var + ": " + verdict + " (level rejections " +
                                   std::to_string(level_rej) + "/4, difference rejections " +
                                   std::to_string(diff_rej) + "/4)");
                summary["unitroot." + var] = verdict;
            }
            for (const auto& v : verdicts) context.push_back("unit roots: " + v);
            bundle.tables.push_back(std::move(t));
        }

        // ------------------------------------------------------------------
        // Stage 2: residual-based cointegration battery.
        // ------------------------------------------------------------------
        PedroniResult ped;
        if (reached(Stage::cointegration)) {
            current_stage = "cointegration";
            std::vector<std::string> regressors(kCanonical.begin() + 1, kCanonical.end());
            if (cfg.pedroni_include_dummy) regressors.push_back(cfg.dummy_name);
            ped = pedroni_tests(panel, kCanonical.front(), regressors, cfg.deterministic_levels);

            ReportTable t;
            t.id = "table3_pedroni_cointegration";
            t.title = "Residual-based panel cointegration tests";
            t.module = "cointegration";
            t.columns = {"family", "statistic", "value", "p_value", "reject_5pct"};
            for (const PedroniRow& row : ped.rows) {
                const bool within = row.stat == PedroniStat::panel_v ||
                                    row.stat == PedroniStat::panel_rho ||
                                    row.stat == PedroniStat::panel_pp ||
                                    row.stat == PedroniStat::panel_adf;
                t.rows.push_back({cell_text(within ? "within" : "between"),
                                  cell_text(pedroni_display(row.stat)), cell_stat(row.z),
                                  cell_pval(row.p_value), cell_text(row.reject_5pct ? "yes" : "no")});
            }
            const std::string decision =
                std::string("cointegration ") +
                (ped.decision_cointegrated ? "supported" : "not supported") + " (" +
                std::to_string(ped.n_rejections) + " of 7 statistics reject at 5%)";
            context.push_back(decision);
            summary["cointegration.decision"] =
                ped.decision_cointegrated ? "cointegrated" : "not cointegrated";
            summary["cointegration.rejections"] = std::to_string(ped.n_rejections) + "/7";
            t.context = context;
            append_unique(bundle.notes, seen_notes, "cointegration: ", ped.dropped);
            append_unique(bundle.notes, seen_notes, "cointegration: ", ped.notes);
            bundle.tables.push_back(std::move(t));
        }

        // ------------------------------------------------------------------
        // Stage 3: pooled error-correction system.
        // ------------------------------------------------------------------
        VecmEstimate est;
        bool have_est = false;
        if (reached(Stage::vecm)) {
            current_stage = "vecm";
            ModelSpec ms;
            ms.variables = kCanonical;
            ms.dummies = {cfg.dummy_name};
            ms.lag_order = cfg.lag_order;
            ms.rank = cfg.rank;
            ms.deterministic = cfg.deterministic_levels;
            ms.validate();

            if (cfg.estimator == "johansen") {
                est = johansen_vecm(panel, ms);
            } else {
                const CointegratingVector lr = estimate_long_run(panel, ms);
                est = estimate_vecm(panel, ms, lr);
            }
            have_est = true;
            append_unique(bundle.notes, seen_notes, "vecm: ", est.dropped);
            append_unique(bundle.notes, seen_notes, "vecm: ", est.notes);
            append_unique(bundle.notes, seen_notes, "vecm long-run: ", est.coint.notes);

            context.push_back("estimator: " + cfg.estimator + "; rank " +
                              std::to_string(cfg.rank) + "; lag order " +
                              std::to_string(cfg.lag_order));
            summary["vecm.estimator"] = cfg.estimator;
            summary["vecm.nobs"] = std::to_string(est.nobs);

            const CointegratingVector& cv = est.coint;
            const std::size_t K = ms.k();

            ReportTable t;
            t.id = "table4_vecm_estimates";
            t.title = "Error-correction estimates";
            t.module = "vecm";
            t.columns = {"equation", "term", "coefficient", "std_error", "t_ratio"};

            // Long-run relation, displayed-vector sign convention.
            t.rows.push_back({cell_text("CointEq1"),
                              cell_text(display_name(ms.variables[0]) + "(-1)"), cell_coef(1.0),
                              cell_blank(), cell_blank()});
            for (std::size_t j = 1; j < K; ++j) {
                Cell se = cell_blank();
                if (static_cast<Eigen::Index>(j) - 1 < cv.regression_se.size()) {
                    se = numeric_or_blank(cell_coef(cv.regression_se(j - 1)));
                }
                Cell tr = cell_blank();
                if (static_cast<Eigen::Index>(j) < cv.normalized_t.size()) {
                    tr = numeric_or_blank(cell_t(cv.normalized_t(j)));
                }
                t.rows.push_back({cell_text("CointEq1"),
                                  cell_text(display_name(ms.variables[j]) + "(-1)"),
                                  cell_coef(cv.normalized(j)), se, tr});
            }
            if (cv.has_trend) {
                t.rows.push_back({cell_text("CointEq1"), cell_text("@TREND"),
                                  cell_coef(-cv.trend_coef), cell_blank(), cell_blank()});
            }
            t.rows.push_back({cell_text("CointEq1"), cell_text("C"),
                              cell_coef(cv.table_constant()), cell_blank(), cell_blank()});
            for (std::size_t d = 0; d < cv.dummies.size(); ++d) {
                if (d < cv.dummy_dropped.size() && cv.dummy_dropped[d]) {
                    t.rows.push_back({cell_text("CointEq1"), cell_text(cv.dummies[d]),
                                      cell_text("dropped (collinear)"), cell_blank(),
                                      cell_blank()});
                    continue;
                }
                t.rows.push_back({cell_text("CointEq1"), cell_text(cv.dummies[d]),
                                  cell_coef(cv.table_dummy(d)),
                                  numeric_or_blank(cell_coef(cv.dummy_se_hac[d])),
                                  numeric_or_blank(cell_t(-cv.dummy_t_hac[d]))});
            }

            // Short-run system, one block per equation.
            for (std::size_t eq = 0; eq < K; ++eq) {
                const std::string eq_label = "D(" + display_name(ms.variables[eq]) + ")";
                for (std::size_t i = 0; i < est.coef_names.size(); ++i) {
                    const double coef = est.coefficients(static_cast<Eigen::Index>(i),
                                                         static_cast<Eigen::Index>(eq));
                    const double se = est.std_errors(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(eq));
                    Cell tr = se > 0.0 ? cell_t(coef / se) : cell_blank();
                    t.rows.push_back({cell_text(eq_label), cell_text(prettify(est.coef_names[i])),
                                      cell_coef(coef), numeric_or_blank(cell_coef(se)),
                                      numeric_or_blank(tr)});
                }
            }

            // The headline policy question: is the break term's long-run
            // coefficient distinguishable from zero?
            for (std::size_t d = 0; d < cv.dummies.size(); ++d) {
                if (d < cv.dummy_dropped.size() && cv.dummy_dropped[d]) {
                    context.push_back("long-run " + cv.dummies[d] + ": dropped (collinear)");
                    continue;
                }
                const bool sig = cv.dummy_p_hac[d] < 0.05;
                context.push_back("long-run " + cv.dummies[d] + ": coefficient " +
                                  fmt("%.6g", cv.table_dummy(d)) + " (p = " +
                                  fmt("%.4f", cv.dummy_p_hac[d]) + ") -> " +
                                  (sig ? "significant" : "not significant") + " at 5%");
                summary["longrun." + cv.dummies[d] + ".p"] = fmt("%.4f", cv.dummy_p_hac[d]);
                summary["longrun." + cv.dummies[d] + ".significant_5pct"] = sig ? "yes" : "no";
            }
            t.context = context;
            bundle.tables.push_back(std::move(t));
        }

        // ------------------------------------------------------------------
        // Stage 4: system dynamics (FEVD, impulse responses, stability).
        // ------------------------------------------------------------------
        if (reached(Stage::dynamics) && have_est) {
            current_stage = "dynamics";
            const std::vector<Eigen::MatrixXd> A = to_levels_var(est);
            const std::size_t K = est.k();

            std::vector<std::string> dyn_log;
            const CompanionForm comp = companion_roots(A);
            const IrfResult ir = irf(A, est.sigma, cfg.irf_horizon, cfg.irf_scales, &dyn_log);
            const FevdResult fv = fevd(A, est.sigma, cfg.irf_horizon, &dyn_log);
            append_unique(bundle.notes, seen_notes, "dynamics: ", dyn_log);

            int near_unit = 0;
            for (double m : comp.moduli) {
                if (std::abs(m - 1.0) < 1e-3) ++near_unit;
            }
            context.push_back("companion roots: max modulus " + fmt("%.6f", comp.max_modulus()) +
                              ", " + std::to_string(near_unit) + " root(s) within 1e-3 of unity");
            summary["dynamics.max_root_modulus"] = fmt("%.6f", comp.max_modulus());
            summary["dynamics.unit_roots"] = std::to_string(near_unit);

            {
                ReportTable t;
                t.id = "table5_fevd";
                t.title = "Forecast-error variance decomposition of " +
                          display_name(est.spec.variables[0]);
                t.module = "dynamics";
                t.context = context;
                t.columns = {"period", "se"};
                for (const std::string& v : est.spec.variables) {
                    t.columns.push_back(display_name(v));
                }
                for (int h = 1; h <= cfg.irf_horizon; ++h) {
                    std::vector<Cell> row;
                    row.push_back(cell_int(h));
                    row.push_back(cell_coef(fv.se[static_cast<std::size_t>(h - 1)](0)));
                    for (std::size_t shock = 0; shock < K; ++shock) {
                        row.push_back(cell_stat(fv.shares[static_cast<std::size_t>(h - 1)](
                            0, static_cast<Eigen::Index>(shock))));
                    }
                    t.rows.push_back(std::move(row));
                }
                bundle.tables.push_back(std::move(t));
            }

            {
                ReportTable t;
                t.id = "graph1_irf";
                t.title = "Orthogonalized impulse responses";
                t.module = "dynamics";
                t.context = context;
                t.context.push_back("shock ordering: " + [&] {
                    std::string s;
                    for (std::size_t i = 0; i < K; ++i) {
                        s += (i ? ", " : "") + display_name(est.spec.variables[i]);
                    }
                    return s;
                }());
                t.columns = {"response_of", "shock", "scale", "horizon", "value"};
                for (std::size_t var = 0; var < K; ++var) {
                    for (std::size_t shock = 0; shock < K; ++shock) {
                        for (double scale : cfg.irf_scales) {
                            for (int h = 1; h <= cfg.irf_horizon; ++h) {
                                t.rows.push_back(
                                    {cell_text(display_name(est.spec.variables[var])),
                                     cell_text(display_name(est.spec.variables[shock])),
                                     cell_coef(scale), cell_int(h),
                                     cell_coef(ir.response(h - 1, static_cast<int>(var),
                                                           static_cast<int>(shock), scale))});
                            }
                        }
                    }
                }
                bundle.tables.push_back(std::move(t));
            }

            {
                ReportTable t;
                t.id = "graph2_companion_roots";
                t.title = "Companion-matrix roots";
                t.module = "dynamics";
                t.context = context;
                t.columns = {"root", "re", "im", "modulus"};
                for (std::size_t i = 0; i < comp.roots.size(); ++i) {
                    t.rows.push_back({cell_int(static_cast<long long>(i + 1)),
                                      cell_coef(comp.roots[i].real()),
                                      cell_coef(comp.roots[i].imag()),
                                      cell_coef(comp.moduli[i])});
                }
                bundle.tables.push_back(std::move(t));
            }
        }

        // ------------------------------------------------------------------
        // Stage 5: residual and pooling diagnostics.
        // ------------------------------------------------------------------
        if (reached(Stage::diagnostics) && have_est) {
            current_stage = "diagnostics";
            const std::size_t K = est.k();

            {
                ReportTable t;
                t.id = "table6_granger_block_exogeneity";
                t.title = "Block-exogeneity Wald tests";
                t.module = "diagnostics";
                t.context = context;
                t.columns = {"equation", "excluded", "chi_sq", "df", "p_value"};
                for (std::size_t eq = 0; eq < K; ++eq) {
                    const std::string target = est.spec.variables[eq];
                    for (const TestReport& r : granger_block_exogeneity(est, target)) {
                        t.rows.push_back({cell_text("D(" + display_name(target) + ")"),
                                          cell_text(prettify(r.name)), cell_stat(r.statistic),
                                          cell_int(static_cast<long long>(r.distribution.df1)),
                                          cell_pval(r.p_value)});
                    }
                }
                bundle.tables.push_back(std::move(t));
            }

            {
                const int max_lag = cfg.lag_order + 2;
                const std::vector<TestReport> reports = serial_correlation_lm(est, max_lag);
                ReportTable t;
                t.id = "table7_serial_correlation_lm";
                t.title = "Residual serial-correlation tests";
                t.module = "diagnostics";
                t.context = context;
                t.context.push_back(
                    "headline statistic: Edgeworth-corrected likelihood ratio (chi-square)");
                t.columns = {"null_hypothesis", "lag",    "lre_stat", "df",
                             "p_value",         "rao_f",  "rao_df1",  "rao_df2",
                             "rao_p"};
                for (std::size_t i = 0; i < reports.size(); ++i) {
                    const TestReport& r = reports[i];
                    const int lag = static_cast<int>(i % static_cast<std::size_t>(max_lag)) + 1;
                    double rao = 0.0, rao_df1 = 0.0, rao_df2 = 0.0, rao_p = 1.0;
                    for (const auto& row : r.components) {
                        if (row.label == "rao_f") {
                            rao = row.values[0];
                            rao_df1 = row.values[1];
                            rao_df2 = row.values[2];
                            rao_p = row.values[3];
                        }
                    }
                    t.rows.push_back({cell_text(r.name), cell_int(lag), cell_stat(r.statistic),
                                      cell_int(static_cast<long long>(r.distribution.df1)),
                                      cell_pval(r.p_value), cell_stat(rao),
                                      cell_int(static_cast<long long>(rao_df1)),
                                      cell_coef(rao_df2), cell_pval(rao_p)});
                }
                bundle.tables.push_back(std::move(t));
            }

            {
                const TestReport white = heteroskedasticity_white(est, true);
                ReportTable t;
                t.id = "table8_heteroskedasticity";
                t.title = "System residual heteroskedasticity test";
                t.module = "diagnostics";
                t.context = context;
                t.columns = {"component", "r_squared", "f_stat", "f_df1", "f_df2",
                             "f_p",       "chi_sq",    "df",     "p_value"};
                t.rows.push_back({cell_text("Joint"), cell_blank(), cell_blank(), cell_blank(),
                                  cell_blank(), cell_blank(), cell_stat(white.statistic),
                                  cell_int(static_cast<long long>(white.distribution.df1)),
                                  cell_pval(white.p_value)});
                for (const auto& row : white.components) {
                    if (row.label.rfind("dropped:", 0) == 0) {
                        t.context.push_back("regressor " + row.label.substr(8) +
                                            " dropped from the auxiliary design (no variation)");
                        continue;
                    }
                    // values: chi_sq, df, p, r_squared, f_stat, f_df2, f_p
                    t.rows.push_back({cell_text(row.label), cell_stat(row.values[3]),
                                      cell_stat(row.values[4]),
                                      cell_int(static_cast<long long>(row.values[1])),
                                      cell_coef(row.values[5]), cell_pval(row.values[6]),
                                      cell_stat(row.values[0]),
                                      cell_int(static_cast<long long>(row.values[1])),
                                      cell_pval(row.values[2])});
                }
                bundle.tables.push_back(std::move(t));
                summary["diagnostics.white_joint_p"] = fmt("%.4f", white.p_value);
            }

            {
                const TestReport sh = slope_homogeneity(panel, est.spec);
                ReportTable t;
                t.id = "table9_slope_homogeneity";
                t.title = "Slope-homogeneity tests";
                t.module = "diagnostics";
                t.context = context;
                t.context.push_back("one-sided (right tail) p-values");
                t.columns = {"statistic", "value", "p_value"};
                for (const auto& row : sh.components) {
                    if (row.label.rfind("dropped:", 0) == 0) {
                        t.context.push_back("entity " + row.label.substr(8) +
                                            " dropped (series too short for entity regression)");
                        continue;
                    }
                    const std::string label =
                        row.label == "delta_tilde" ? "Delta_tilde" : "Delta_tilde_adj";
                    t.rows.push_back(
                        {cell_text(label), cell_stat(row.values[0]), cell_pval(row.values[1])});
                }
                bundle.tables.push_back(std::move(t));
                summary["diagnostics.slope_homogeneity_p"] = fmt("%.4f", sh.p_value);
            }
        }
    } catch (const ValidationError& e) {
        bundle.failed = true;
        bundle.failed_stage = current_stage;
        bundle.failure_message = e.what();
        bundle.failure_exit_code = 2;
        summary["status"] = "FAILED at stage " + current_stage;
    } catch (const NumericError& e) {
        bundle.failed = true;
        bundle.failed_stage = current_stage;
        bundle.failure_message = e.what();
        bundle.failure_exit_code = 3;
        summary["status"] = "FAILED at stage " + current_stage;
    }

    // ----------------------------------------------------------------------
    // Run summary: stamped decisions in key/value form.
    // ----------------------------------------------------------------------
    {
        ReportTable t;
        t.id = "summary";
        t.title = "Run summary";
        t.module = "pipeline";
        t.columns = {"key", "value"};
        t.rows.push_back({cell_text("version"), cell_text(kVersion)});
        t.rows.push_back({cell_text("config_hash"), cell_text(config_hash(cfg))});
        t.rows.push_back({cell_text("input"), cell_text(cfg.input)});
        for (const auto& [key, value] : summary) {
            t.rows.push_back({cell_text(key), cell_text(value)});
        }
        for (const auto& line : context) {
            t.rows.push_back({cell_text("decision"), cell_text(line)});
        }
        if (bundle.failed) {
            t.rows.push_back({cell_text("failure"),
                              cell_text("stage " + bundle.failed_stage + ": " +
                                        bundle.failure_message)});
        }
        bundle.tables.push_back(std::move(t));
    }

    return bundle;
}

}  // namespace panelbreak
