// Monte Carlo calibrator for the standardization-moment tables embedded in
// the library. It simulates the exact runtime ingredient code paths
// (unit_root_detail::llc_ingredients, unit_root_detail::adf_tstat_fixed,
// cointegration_detail::entity_ingredients) under the relevant null
// hypotheses and emits drop-in replacement translation units:
//
//   <out-dir>/unit_root_tables.cpp   pooled t* (mu*, sigma*) and group-mean
//                                    t moments, by deterministic case
//   <out-dir>/pedroni_tables.cpp     (mu, nu) for the seven residual-based
//                                    panel cointegration statistics
//
// The output is byte-reproducible for a given --seed. `--quick` divides the
// replication counts by 200 for smoke runs; do not commit quick tables.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "panelbreak/cointegration.hpp"
#include "panelbreak/errors.hpp"
#include "panelbreak/panel.hpp"
#include "panelbreak/rng.hpp"
#include "panelbreak/stats.hpp"
#include "panelbreak/unit_root.hpp"

namespace pb = panelbreak;
using pb::stats::Deterministic;

namespace {

struct Options {
    std::string out_dir = "generated";
    std::uint64_t seed = 20240817ULL;
    bool quick = false;
    std::string part = "all";  // llc | ips | pedroni | all
};

int reps_scaled(const Options& o, int full) { return o.quick ? std::max(200, full / 200) : full; }

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v, double m) {
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double cov_of(const std::vector<double>& a, double ma, const std::vector<double>& b, double mb) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(a.size() - 1);
}

void random_walk(pb::SplitRng& rng, int len, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(len));
    double level = rng.normal();
    out[0] = level;
    for (int t = 1; t < len; ++t) {
        level += rng.normal();
        out[static_cast<std::size_t>(t)] = level;
    }
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Pooled t* adjustments: for each deterministic case and average effective
// length T~, fit (mu*, sigma*) such that the pooled statistic is centered
// and scaled in the many-entity limit. With per-entity ingredients
// A = e~'v~/s^2, B = v~'v~/s^2, C = e~'e~/s^2 and long-run ratio s, the
// statistic reduces to t* = [sum A - total * sbar * mu*] / (sig~ sqrt(sum B) sigma*),
// so mu* = E[A]/(T~ E[s]) and sigma* = sd(A - T~ s mu*) / sqrt(c0 E[B]) with
// c0 = plim sig~^2 = (E[C] - 2 d0 E[A] + d0^2 E[B]) / T~, d0 = E[A]/E[B].
// ---------------------------------------------------------------------------

constexpr std::array<int, 14> kLlcGrid = {20, 25, 30, 35, 40, 45, 50, 60, 70, 80, 90, 100, 150, 250};

struct LlcCell {
    double mu = 0.0;
    double sigma = 1.0;
};

LlcCell calibrate_llc_cell(const Options& o, Deterministic det, int t_tilde, std::uint64_t stream) {
    const int reps = reps_scaled(o, t_tilde >= 150 ? 100000 : 200000);
    pb::SplitRng rng = pb::SplitRng::for_entity(o.seed, stream);

    std::vector<double> A(static_cast<std::size_t>(reps)), S(static_cast<std::size_t>(reps));
    double sum_b = 0.0, sum_c = 0.0;
    std::vector<double> y;
    for (int r = 0; r < reps; ++r) {
        random_walk(rng, t_tilde + 1, y);  // lags = 0 -> effective length T~
        const auto ing = pb::unit_root_detail::llc_ingredients(y, det, 0);
        A[static_cast<std::size_t>(r)] = ing.A;
        S[static_cast<std::size_t>(r)] = ing.s_ratio;
        sum_b += ing.B;
        sum_c += ing.C;
    }
    const double ea = mean_of(A);
    const double es = mean_of(S);
    const double eb = sum_b / reps;
    const double ec = sum_c / reps;
    const double d0 = ea / eb;
    const double c0 = (ec - 2.0 * d0 * ea + d0 * d0 * eb) / t_tilde;

    LlcCell cell;
    cell.mu = ea / (t_tilde * es);
    double ss = 0.0;
    for (int r = 0; r < reps; ++r) {
        const double dev = A[static_cast<std::size_t>(r)] - t_tilde * S[static_cast<std::size_t>(r)] * cell.mu;
        ss += dev * dev;
    }
    const double sd_dev = std::sqrt(ss / (reps - 1));
    cell.sigma = sd_dev / std::sqrt(c0 * eb);
    return cell;
}

// ---------------------------------------------------------------------------
// Group-mean t moments: mean and variance of the Dickey-Fuller t-ratio on a
// driftless random walk at fixed lag order, per series length.
// ---------------------------------------------------------------------------

constexpr std::array<int, 12> kIpsGrid = {15, 20, 25, 30, 40, 50, 60, 70, 100, 150, 200, 400};
constexpr int kIpsMaxLag = 8;

struct IpsCell {
    double mean = 0.0;
    double var = 1.0;
    bool feasible = false;
};

IpsCell calibrate_ips_cell(const Options& o, Deterministic det, int len, int lag,
                           std::uint64_t stream) {
    IpsCell cell;
    {
        // Same arithmetic as the runtime guard in adf_tstat_fixed.
        const int ndet = det == Deterministic::none ? 0 : (det == Deterministic::constant ? 1 : 2);
        const int m = len - 1 - lag;
        const int k = 1 + lag + ndet;
        if (m < k + 1) return cell;
    }
    const int reps = reps_scaled(o, lag >= 5 ? 50000 : 100000);
    pb::SplitRng rng = pb::SplitRng::for_entity(o.seed, stream);
    std::vector<double> t(static_cast<std::size_t>(reps));
    std::vector<double> y;
    for (int r = 0; r < reps; ++r) {
        random_walk(rng, len, y);
        t[static_cast<std::size_t>(r)] = pb::unit_root_detail::adf_tstat_fixed(y, det, lag).first;
    }
    cell.mean = mean_of(t);
    cell.var = var_of(t, cell.mean);
    cell.feasible = true;
    return cell;
}

// ---------------------------------------------------------------------------
// Panel cointegration battery moments. One simulation set per
// (deterministic case, regressor count m) provides all seven statistics:
// independent driftless walks, first-stage residual ingredients at lag 0.
// Group statistics standardize the per-entity functional q directly
// (mu = E[q], nu = Var[q]); pooled statistics standardize smooth functions
// of ingredient means via the delta method.
// ---------------------------------------------------------------------------

struct PedroniCell {
    // mu/nu in PedroniStat order: panel_v, panel_rho, panel_pp, panel_adf,
    // group_rho, group_pp, group_adf.
    std::array<double, 7> mu{};
    std::array<double, 7> nu{};
};

PedroniCell calibrate_pedroni_cell(const Options& o, Deterministic det, int m,
                                   std::uint64_t stream) {
    const int t_len = 100;
    const int reps = reps_scaled(o, m <= 3 ? 200000 : 100000);
    pb::SplitRng rng = pb::SplitRng::for_entity(o.seed, stream);

    std::vector<double> va(static_cast<std::size_t>(reps)), vb(va), vs(va);
    std::vector<double> vas(va), vbs(va), vss(va);
    std::vector<double> qr(va), qp(va), qa(va);

    pb::FrameView frame;
    frame.entity = "cal";
    frame.variables.resize(static_cast<std::size_t>(m) + 1);
    frame.variables[0] = "y";
    for (int j = 1; j <= m; ++j) frame.variables[static_cast<std::size_t>(j)] = "x" + std::to_string(j);
    frame.columns.assign(static_cast<std::size_t>(m) + 1, {});
    frame.first_year = 0;

    for (int r = 0; r < reps; ++r) {
        for (int c = 0; c <= m; ++c) random_walk(rng, t_len, frame.columns[static_cast<std::size_t>(c)]);
        const auto ing = pb::cointegration_detail::entity_ingredients(frame, det, 0);
        const std::size_t i = static_cast<std::size_t>(r);
        va[i] = ing.a;
        vb[i] = ing.b;
        vs[i] = ing.s;
        vas[i] = ing.a_star;
        vbs[i] = ing.b_star;
        vss[i] = ing.s_star;
        qr[i] = static_cast<double>(ing.nobs) * ing.g_num / ing.g_den;
        qp[i] = ing.g_num / std::sqrt(ing.g_sig2 * ing.g_den);
        qa[i] = ing.adf_t;
    }

    const double ea = mean_of(va), eb = mean_of(vb), es = mean_of(vs);
    const double eas = mean_of(vas), ebs = mean_of(vbs), ess = mean_of(vss);

    PedroniCell cell;

    // panel_v: raw = sqrt(N)/mean(b); f(b) = 1/b.
    cell.mu[0] = 1.0 / eb;
    cell.nu[0] = var_of(vb, eb) / (eb * eb * eb * eb);

    // panel_rho: f(a, b) = a/b.
    {
        const double ga = 1.0 / eb, gb = -ea / (eb * eb);
        cell.mu[1] = ea / eb;
        cell.nu[1] = ga * ga * var_of(va, ea) + gb * gb * var_of(vb, eb) +
                     2.0 * ga * gb * cov_of(va, ea, vb, eb);
    }

    // panel_pp / panel_adf: f(a, s, b) = a / sqrt(s*b).
    auto delta_ratio = [](const std::vector<double>& a, const std::vector<double>& s,
                          const std::vector<double>& b, double ma, double ms, double mb,
                          double& mu, double& nu) {
        mu = ma / std::sqrt(ms * mb);
        const double ga = 1.0 / std::sqrt(ms * mb);
        const double gs = -0.5 * ma / (std::sqrt(mb) * ms * std::sqrt(ms));
        const double gb = -0.5 * ma / (std::sqrt(ms) * mb * std::sqrt(mb));
        nu = ga * ga * var_of(a, ma) + gs * gs * var_of(s, ms) + gb * gb * var_of(b, mb) +
             2.0 * ga * gs * cov_of(a, ma, s, ms) + 2.0 * ga * gb * cov_of(a, ma, b, mb) +
             2.0 * gs * gb * cov_of(s, ms, b, mb);
    };
    delta_ratio(va, vs, vb, ea, es, eb, cell.mu[2], cell.nu[2]);
    delta_ratio(vas, vss, vbs, eas, ess, ebs, cell.mu[3], cell.nu[3]);

    // group statistics: plain mean/variance of the per-entity functional.
    const double eqr = mean_of(qr), eqp = mean_of(qp), eqa = mean_of(qa);
    cell.mu[4] = eqr;
    cell.nu[4] = var_of(qr, eqr);
    cell.mu[5] = eqp;
    cell.nu[5] = var_of(qp, eqp);
    cell.mu[6] = eqa;
    cell.nu[6] = var_of(qa, eqa);
    return cell;
}

// ---------------------------------------------------------------------------
// Emission.
// ---------------------------------------------------------------------------

std::string provenance(const Options& o, const std::string& what) {
    std::string s;
    s += "// GENERATED by tools/calibrate_tables.cpp - do not edit by hand.\n";
    s += "// Regenerate:  calibrate_tables --seed " + std::to_string(o.seed) +
         " --out-dir <dir>  (then copy over src/)\n";
    s += "// " + what + "\n";
    if (o.quick) s += "// WARNING: produced with --quick; replication counts were divided by 200.\n";
    return s;
}

void emit_unit_root_tables(const Options& o, const std::string& path,
                           const std::array<std::array<LlcCell, 14>, 3>& llc,
                           const std::array<std::array<std::array<IpsCell, 9>, 12>, 2>& ips) {
    std::ofstream f(path);
    f << provenance(o,
                    "Pooled-t* adjustments: 200k driftless random walks per cell (100k for "
                    "T~ >= 150), lag 0,\n// through unit_root_detail::llc_ingredients. "
                    "Group-mean t moments: 100k walks per cell\n// (50k for lag >= 5) through "
                    "unit_root_detail::adf_tstat_fixed at fixed lag.");
    f << R"cpp(
#include "panelbreak/unit_root_tables.hpp"

#include <algorithm>
#include <array>
#include <cstddef>

namespace panelbreak::unit_root_tables {

namespace {

using stats::Deterministic;

int det_index(Deterministic det) {
    switch (det) {
        case Deterministic::none: return 0;
        case Deterministic::constant: return 1;
        case Deterministic::constant_trend: return 2;
    }
    return 1;
}

// Linear interpolation over an ascending grid, clamped at both ends.
template <std::size_t N>
double interp(const std::array<double, N>& xs, const double (&ys)[N], double x) {
    if (x <= xs.front()) return ys[0];
    if (x >= xs.back()) return ys[N - 1];
    std::size_t hi = 1;
    while (hi < N - 1 && xs[hi] < x) ++hi;
    const double x0 = xs[hi - 1], x1 = xs[hi];
    const double w = (x - x0) / (x1 - x0);
    return (1.0 - w) * ys[hi - 1] + w * ys[hi];
}

constexpr std::array<double, 14> kLlcGrid = {20,  25,  30,  35,  40, 45, 50,
                                             60,  70,  80,  90,  100, 150, 250};

)cpp";
    auto write_llc = [&](const char* name, bool sigma) {
        f << "constexpr double " << name << "[3][14] = {\n";
        for (int d = 0; d < 3; ++d) {
            f << "    {";
            for (int i = 0; i < 14; ++i) {
                const LlcCell& c = llc[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)];
                f << fmt(sigma ? c.sigma : c.mu);
                if (i + 1 < 14) f << ", ";
            }
            f << "},\n";
        }
        f << "};\n\n";
    };
    write_llc("kLlcMu", false);
    write_llc("kLlcSigma", true);

    f << "constexpr std::array<double, 12> kIpsGrid = {15, 20, 25, 30, 40, 50, 60, 70, 100, 150, "
         "200, 400};\n\n";
    auto write_ips = [&](const char* name, bool variance) {
        // det index 0 (no deterministic term) is unreachable: the group-mean
        // test rejects that case before any table lookup.
        f << "constexpr double " << name << "[3][12][9] = {\n";
        for (int d = 0; d < 3; ++d) {
            f << "    {\n";
            for (int i = 0; i < 12; ++i) {
                f << "        {";
                for (int l = 0; l <= kIpsMaxLag; ++l) {
                    double v = variance ? 1.0 : 0.0;
                    if (d > 0) {
                        const IpsCell& c = ips[static_cast<std::size_t>(d - 1)]
                                              [static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
                        v = variance ? c.var : c.mean;
                    }
                    f << fmt(v);
                    if (l < kIpsMaxLag) f << ", ";
                }
                f << "},\n";
            }
            f << "    },\n";
        }
        f << "};\n\n";
    };
    write_ips("kIpsMean", false);
    write_ips("kIpsVar", true);

    f << R"cpp(}  // namespace

LlcAdjustment llc_adjustment(Deterministic det, double t_tilde) {
    const int d = det_index(det);
    return {interp(kLlcGrid, kLlcMu[d], t_tilde), interp(kLlcGrid, kLlcSigma[d], t_tilde)};
}

IpsMoments ips_moments(Deterministic det, int series_len, int lags) {
    const int d = det_index(det);
    const int l = std::clamp(lags, 0, 8);
    double mean_col[12], var_col[12];
    for (int i = 0; i < 12; ++i) {
        mean_col[i] = kIpsMean[d][i][l];
        var_col[i] = kIpsVar[d][i][l];
    }
    const double len = static_cast<double>(series_len);
    return {interp(kIpsGrid, mean_col, len), interp(kIpsGrid, var_col, len)};
}

}  // namespace panelbreak::unit_root_tables
)cpp";
}

void emit_pedroni_tables(const Options& o, const std::string& path,
                         const std::array<std::array<PedroniCell, 7>, 2>& ped) {
    std::ofstream f(path);
    f << provenance(o,
                    "Residual-battery moments: 200k independent-walk panels of length 100 per "
                    "cell (100k for\n// m >= 4), residual ingredients at lag 0 through "
                    "cointegration_detail::entity_ingredients. Length 100 pins the finite-sample\n"
                    "// moments at the scale the size acceptance tests use.");
    f << R"cpp(
#include <string>

#include "panelbreak/cointegration.hpp"
#include "panelbreak/errors.hpp"

namespace panelbreak::pedroni_tables {

namespace {

// [det: constant, constant_trend][m-1][statistic in PedroniStat order]
)cpp";
    auto write_ped = [&](const char* name, bool nu) {
        f << "constexpr double " << name << "[2][7][7] = {\n";
        for (int d = 0; d < 2; ++d) {
            f << "    {\n";
            for (int m = 0; m < 7; ++m) {
                f << "        {";
                for (int s = 0; s < 7; ++s) {
                    const PedroniCell& c = ped[static_cast<std::size_t>(d)][static_cast<std::size_t>(m)];
                    f << fmt(nu ? c.nu[static_cast<std::size_t>(s)] : c.mu[static_cast<std::size_t>(s)]);
                    if (s + 1 < 7) f << ", ";
                }
                f << "},\n";
            }
            f << "    },\n";
        }
        f << "};\n\n";
    };
    write_ped("kMu", false);
    write_ped("kNu", true);

    f << R"cpp(}  // namespace

MomentRow moments(PedroniStat stat, int m_regressors, stats::Deterministic det) {
    if (m_regressors < 1 || m_regressors > 7) {
        throw InvalidSpec("no standardization moments for " + std::to_string(m_regressors) +
                          " regressors (supported: 1..7)");
    }
    if (det == stats::Deterministic::none) {
        throw InvalidSpec("no standardization moments for the no-deterministic case");
    }
    const int d = det == stats::Deterministic::constant ? 0 : 1;
    const int s = static_cast<int>(stat);
    return {kMu[d][m_regressors - 1][s], kNu[d][m_regressors - 1][s]};
}

}  // namespace panelbreak::pedroni_tables
)cpp";
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Regenerates the embedded standardization-moment tables by Monte Carlo"};
    app.add_option("--out-dir", opt.out_dir, "directory for the generated .cpp files");
    app.add_option("--seed", opt.seed, "master seed for all simulation streams");
    app.add_flag("--quick", opt.quick, "divide replication counts by 200 (smoke runs only)");
    app.add_option("--part", opt.part, "llc | ips | pedroni | all")
        ->check(CLI::IsMember({"llc", "ips", "pedroni", "all"}));
    CLI11_PARSE(app, argc, argv);

    const bool do_llc = opt.part == "all" || opt.part == "llc";
    const bool do_ips = opt.part == "all" || opt.part == "ips";
    const bool do_ped = opt.part == "all" || opt.part == "pedroni";

    const std::array<Deterministic, 3> kDets = {Deterministic::none, Deterministic::constant,
                                                Deterministic::constant_trend};

    std::array<std::array<LlcCell, 14>, 3> llc{};
    if (do_llc) {
        for (int d = 0; d < 3; ++d) {
            for (std::size_t i = 0; i < kLlcGrid.size(); ++i) {
                const std::uint64_t stream = 1000 + static_cast<std::uint64_t>(d) * 100 + i;
                llc[static_cast<std::size_t>(d)][i] =
                    calibrate_llc_cell(opt, kDets[static_cast<std::size_t>(d)], kLlcGrid[i], stream);
                std::fprintf(stderr, "llc det=%d T~=%d mu=%.4f sigma=%.4f\n", d, kLlcGrid[i],
                             llc[static_cast<std::size_t>(d)][i].mu,
                             llc[static_cast<std::size_t>(d)][i].sigma);
            }
        }
    }

    std::array<std::array<std::array<IpsCell, 9>, 12>, 2> ips{};
    if (do_ips) {
        for (int d = 0; d < 2; ++d) {
            for (std::size_t i = 0; i < kIpsGrid.size(); ++i) {
                for (int l = 0; l <= kIpsMaxLag; ++l) {
                    const std::uint64_t stream = 10000 + static_cast<std::uint64_t>(d) * 2000 +
                                                 i * 100 + static_cast<std::uint64_t>(l);
                    IpsCell c = calibrate_ips_cell(opt, kDets[static_cast<std::size_t>(d + 1)],
                                                   kIpsGrid[i], l, stream);
                    if (!c.feasible) {
                        // Carry the nearest feasible lag forward so the table
                        // stays dense; the runtime never requests an
                        // infeasible order for the observed length.
                        c = ips[static_cast<std::size_t>(d)][i][static_cast<std::size_t>(l - 1)];
                    }
                    ips[static_cast<std::size_t>(d)][i][static_cast<std::size_t>(l)] = c;
                }
                std::fprintf(stderr, "ips det=%d len=%d done (lag0 mean=%.4f var=%.4f)\n", d + 1,
                             kIpsGrid[i], ips[static_cast<std::size_t>(d)][i][0].mean,
                             ips[static_cast<std::size_t>(d)][i][0].var);
            }
        }
    }

    std::array<std::array<PedroniCell, 7>, 2> ped{};
    if (do_ped) {
        for (int d = 0; d < 2; ++d) {
            for (int m = 1; m <= 7; ++m) {
                const std::uint64_t stream =
                    50000 + static_cast<std::uint64_t>(d) * 100 + static_cast<std::uint64_t>(m);
                ped[static_cast<std::size_t>(d)][static_cast<std::size_t>(m - 1)] =
                    calibrate_pedroni_cell(opt, kDets[static_cast<std::size_t>(d + 1)], m, stream);
                const auto& c = ped[static_cast<std::size_t>(d)][static_cast<std::size_t>(m - 1)];
                std::fprintf(stderr, "pedroni det=%d m=%d panel_rho mu=%.4f nu=%.4f\n", d + 1, m,
                             c.mu[1], c.nu[1]);
            }
        }
    }

    if (do_llc || do_ips) {
        emit_unit_root_tables(opt, opt.out_dir + "/unit_root_tables.cpp", llc, ips);
        std::fprintf(stderr, "wrote %s/unit_root_tables.cpp\n", opt.out_dir.c_str());
    }
    if (do_ped) {
        emit_pedroni_tables(opt, opt.out_dir + "/pedroni_tables.cpp", ped);
        std::fprintf(stderr, "wrote %s/pedroni_tables.cpp\n", opt.out_dir.c_str());
    }
    return 0;
}
