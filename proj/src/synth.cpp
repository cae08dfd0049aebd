#include "panelbreak/synth.hpp"

#include <cmath>
#include <cstdio>

#include "panelbreak/errors.hpp"
#include "panelbreak/rng.hpp"

namespace panelbreak {

std::string to_string(DgpKind k) {
    switch (k) {
        case DgpKind::independent_walks: return "independent_walks";
        case DgpKind::cointegrated: return "cointegrated";
        case DgpKind::stationary_ar: return "stationary_ar";
        case DgpKind::heterogeneous_slopes: return "heterogeneous_slopes";
        case DgpKind::vecm_calibrated: return "vecm_calibrated";
    }
    return "?";
}

DgpKind dgp_kind_from_string(const std::string& s) {
    if (s == "independent_walks") return DgpKind::independent_walks;
    if (s == "cointegrated") return DgpKind::cointegrated;
    if (s == "stationary_ar") return DgpKind::stationary_ar;
    if (s == "heterogeneous_slopes") return DgpKind::heterogeneous_slopes;
    if (s == "vecm_calibrated") return DgpKind::vecm_calibrated;
    throw InvalidSpec("unknown generator kind '" + s + "'");
}

namespace {

// Level anchors for log-scale-plausible panels; the statistics downstream
// are scale invariant, these only keep rendered numbers natural.
constexpr double kBase[4] = {1.0, 7.0, 8.0, 16.0};
constexpr double kEntitySpread[4] = {0.5, 0.4, 0.5, 1.0};

}  // namespace

DgpSpec default_spec(DgpKind kind) {
    DgpSpec s;
    s.kind = kind;
    s.coint_vector.resize(4);
    s.coint_vector << 1.0, -5.21, 3.32, -0.43;
    s.loadings = Eigen::VectorXd::Zero(4);
    s.noise_sd.resize(4);
    switch (kind) {
        case DgpKind::independent_walks:
            s.noise_sd << 0.15, 0.15, 0.15, 0.15;
            break;
        case DgpKind::stationary_ar:
            s.noise_sd << 0.15, 0.15, 0.15, 0.15;
            s.ar_coef = 0.5;
            break;
        case DgpKind::cointegrated:
            // first entry: equilibrium-deviation shock; rest: walk steps
            s.noise_sd << 0.05, 0.15, 0.15, 0.15;
            s.loadings(0) = -0.2;
            s.rho_resid = 0.8;
            break;
        case DgpKind::heterogeneous_slopes:
            s.noise_sd << 1.0, 1.0, 1.0, 1.0;
            s.hetero_factor = 2.0;
            break;
        case DgpKind::vecm_calibrated:
            s.n_entities = 40;
            s.first_year = 1961;
            s.n_periods = 62;  // 1961..2022
            s.loadings.resize(4);
            s.loadings << -0.15, 0.0, 0.0, 0.0;  // implied by rho_resid = 0.85
            s.rho_resid = 0.85;
            // first entry: equilibrium-deviation shock; rest: walk steps
            s.noise_sd << 0.08, 0.25, 0.25, 0.25;
            s.gamma1.setZero(4, 4);
            s.gamma2.setZero(4, 4);
            break;
    }
    return s;
}

namespace {

void validate(const DgpSpec& s) {
    const int k = static_cast<int>(s.variables.size());
    if (k < 1) throw InvalidSpec("generator needs at least one variable");
    if (s.n_entities < 1 || s.n_periods < 2) {
        throw InvalidSpec("generator needs n_entities >= 1 and n_periods >= 2");
    }
    if (s.noise_sd.size() != k) throw InvalidSpec("noise_sd length must match the variable count");
    const bool needs_vector =
        s.kind == DgpKind::cointegrated || s.kind == DgpKind::vecm_calibrated;
    if (needs_vector) {
        if (s.coint_vector.size() != k) {
            throw InvalidSpec("cointegrating vector length must match the variable count");
        }
        if (s.coint_vector(0) != 1.0) throw InvalidSpec("cointegrating vector must lead with 1");
        if (s.loadings.size() != k) throw InvalidSpec("loadings length must match the variable count");
    }
    if (s.kind == DgpKind::vecm_calibrated) {
        if (s.gamma1.rows() != k || s.gamma1.cols() != k || s.gamma2.rows() != k ||
            s.gamma2.cols() != k) {
            throw InvalidSpec("short-run blocks must be K x K");
        }
    }
}

}  // namespace

PanelDataset generate(const DgpSpec& spec) {
    validate(spec);
    const int k = static_cast<int>(spec.variables.size());
    const int t_len = spec.n_periods;

    std::vector<Observation> obs;
    obs.reserve(static_cast<std::size_t>(spec.n_entities) * t_len * k);

    for (int e = 0; e < spec.n_entities; ++e) {
        SplitRng rng = SplitRng::for_entity(spec.seed, static_cast<std::uint64_t>(e));
        char name[16];
        std::snprintf(name, sizeof(name), "E%03d", e + 1);

        Eigen::VectorXd fe(k);
        for (int v = 0; v < k; ++v) {
            fe(v) = kBase[v % 4] + kEntitySpread[v % 4] * rng.normal();
        }

        Eigen::MatrixXd y(t_len, k);
        switch (spec.kind) {
            case DgpKind::independent_walks: {
                for (int v = 0; v < k; ++v) y(0, v) = fe(v) + spec.noise_sd(v) * rng.normal();
                for (int t = 1; t < t_len; ++t) {
                    for (int v = 0; v < k; ++v) {
                        y(t, v) = y(t - 1, v) + spec.noise_sd(v) * rng.normal();
                    }
                }
                break;
            }
            case DgpKind::stationary_ar: {
                // start at the stationary distribution
                const double rho = spec.ar_coef;
                const double scale0 = 1.0 / std::sqrt(std::max(1.0 - rho * rho, 1e-12));
                for (int v = 0; v < k; ++v) {
                    y(0, v) = fe(v) + spec.noise_sd(v) * scale0 * rng.normal();
                }
                for (int t = 1; t < t_len; ++t) {
                    for (int v = 0; v < k; ++v) {
                        y(t, v) = fe(v) + rho * (y(t - 1, v) - fe(v)) + spec.noise_sd(v) * rng.normal();
                    }
                }
                break;
            }
            case DgpKind::cointegrated: {
                // x-block: random walks; equilibrium deviation: AR(rho_resid);
                // y1 = fe + b'x + u with b = -coint_vector[1..].
                const double rho = spec.rho_resid;
                Eigen::VectorXd b = -spec.coint_vector.tail(k - 1);
                double u = spec.noise_sd(0) / std::sqrt(std::max(1.0 - rho * rho, 1e-12)) *
                           rng.normal();
                for (int t = 0; t < t_len; ++t) {
                    if (t == 0) {
                        for (int v = 1; v < k; ++v) {
                            y(0, v) = fe(v) + spec.noise_sd(v) * rng.normal();
                        }
                    } else {
                        u = rho * u + spec.noise_sd(0) * rng.normal();
                        for (int v = 1; v < k; ++v) {
                            y(t, v) = y(t - 1, v) + spec.noise_sd(v) * rng.normal();
                        }
                    }
                    double mean = fe(0);
                    for (int v = 1; v < k; ++v) mean += b(v - 1) * y(t, v);
                    y(t, 0) = mean + u;
                }
                break;
            }
            case DgpKind::heterogeneous_slopes: {
                // static regression with iid regressors; the second half of
                // the entities scales the first slope.
                Eigen::VectorXd b(k - 1);
                for (int j = 0; j < k - 1; ++j) b(j) = 0.5 - 0.2 * j;
                if (e >= spec.n_entities / 2) b(0) *= spec.hetero_factor;
                for (int t = 0; t < t_len; ++t) {
                    double mean = fe(0);
                    for (int v = 1; v < k; ++v) {
                        y(t, v) = spec.noise_sd(v) * rng.normal();
                        mean += b(v - 1) * y(t, v);
                    }
                    y(t, 0) = mean + spec.noise_sd(0) * rng.normal();
                }
                break;
            }
            case DgpKind::vecm_calibrated: {
                // Triangular form: the non-first variables are random walks
                // whose differences follow diagonal AR(2) dynamics; the first
                // variable is tied to them through the levels relation plus an
                // AR(rho_resid) equilibrium deviation, so the implied
                // first-equation loading is rho_resid - 1.  Only the gamma
                // diagonals (rows 1..k-1) are used.
                const double rho = spec.rho_resid;
                Eigen::VectorXd b = -spec.coint_vector.tail(k - 1);
                Eigen::VectorXd d1 = Eigen::VectorXd::Zero(k - 1);  // last difference
                Eigen::VectorXd d2 = d1;                            // one before
                auto step_differences = [&]() {
                    for (int j = 0; j < k - 1; ++j) {
                        const double step = spec.gamma1(j + 1, j + 1) * d1(j) +
                                            spec.gamma2(j + 1, j + 1) * d2(j) +
                                            spec.noise_sd(j + 1) * rng.normal();
                        d2(j) = d1(j);
                        d1(j) = step;
                    }
                };
                for (int t = 0; t < spec.burn_in; ++t) step_differences();
                double u = spec.noise_sd(0) / std::sqrt(std::max(1.0 - rho * rho, 1e-12)) *
                           rng.normal();
                for (int t = 0; t < t_len; ++t) {
                    if (t == 0) {
                        for (int v = 1; v < k; ++v) {
                            y(0, v) = fe(v) + spec.noise_sd(v) * rng.normal();
                        }
                    } else {
                        u = rho * u + spec.noise_sd(0) * rng.normal();
                        step_differences();
                        for (int j = 0; j < k - 1; ++j) {
                            y(t, j + 1) = y(t - 1, j + 1) + d1(j);
                        }
                    }
                    double mean = fe(0);
                    for (int v = 1; v < k; ++v) mean += b(v - 1) * y(t, v);
                    y(t, 0) = mean + u;
                }
                break;
            }
        }

        for (int t = 0; t < t_len; ++t) {
            for (int v = 0; v < k; ++v) {
                obs.push_back({name, spec.first_year + t, spec.variables[static_cast<std::size_t>(v)],
                               y(t, v)});
            }
        }
    }

    PanelOptions options;
    options.min_obs = 1;
    return PanelDataset::from_observations(spec.variables, obs, options);
}

}  // namespace panelbreak
