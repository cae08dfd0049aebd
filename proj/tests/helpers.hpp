// Shared fixtures for the test suite: compact panel builders, imposed
// long-run relations, and reproducible random systems.
#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "panelbreak/dynamics.hpp"
#include "panelbreak/panel.hpp"
#include "panelbreak/rng.hpp"
#include "panelbreak/vecm.hpp"

namespace testutil {

inline std::vector<std::string> entity_names(std::size_t n) {
    std::vector<std::string> names(n);
    for (std::size_t e = 0; e < n; ++e) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "E%02zu", e);
        names[e] = buf;
    }
    return names;
}

// Build a panel from data[entity][variable][year-offset].
inline panelbreak::PanelDataset make_panel(
    const std::vector<std::string>& names, const std::vector<std::string>& vars,
    const std::vector<std::vector<std::vector<double>>>& data, int first_year = 1980,
    int min_obs = 1) {
    std::vector<panelbreak::Observation> obs;
    for (std::size_t e = 0; e < names.size(); ++e) {
        for (std::size_t v = 0; v < vars.size(); ++v) {
            for (std::size_t t = 0; t < data[e][v].size(); ++t) {
                obs.push_back({names[e], first_year + static_cast<int>(t), vars[v], data[e][v][t]});
            }
        }
    }
    panelbreak::PanelOptions options;
    options.min_obs = min_obs;
    return panelbreak::PanelDataset::from_observations(vars, obs, options);
}

// Rebuild a panel with one variable's values replaced (same shape, all observed).
inline panelbreak::PanelDataset replace_series(const panelbreak::PanelDataset& p,
                                               const std::string& var,
                                               const std::vector<std::vector<double>>& vals,
                                               int min_obs = 10) {
    std::vector<panelbreak::Observation> obs;
    for (std::size_t e = 0; e < p.n_entities(); ++e) {
        for (const auto& v : p.variables()) {
            auto sv = p.series(p.entities()[e], v);
            for (std::size_t t = 0; t < sv->data.size(); ++t) {
                const double value = (v == var) ? vals[e][t] : sv->data[t];
                obs.push_back({p.entities()[e], sv->first_year + static_cast<int>(t), v, value});
            }
        }
    }
    panelbreak::PanelOptions options;
    options.min_obs = min_obs;
    return panelbreak::PanelDataset::from_observations(p.variables(), obs, options);
}

// A long-run relation imposed by hand (unit lead coefficient, zero intercepts).
inline panelbreak::CointegratingVector imposed_relation(const panelbreak::PanelDataset& p,
                                                        const std::vector<std::string>& vars,
                                                        const Eigen::VectorXd& normalized) {
    panelbreak::CointegratingVector cv;
    cv.variables = vars;
    cv.normalized = normalized;
    cv.normalized_t = Eigen::VectorXd::Zero(normalized.size());
    cv.regression_slopes = -normalized.tail(normalized.size() - 1);
    cv.regression_se = Eigen::VectorXd::Zero(normalized.size() - 1);
    cv.constant = 0.0;
    cv.entities = p.entities();
    cv.entity_intercepts.assign(p.n_entities(), 0.0);
    cv.method = "imposed";
    return cv;
}

// Random stable VAR coefficient matrices: dense draws rescaled so the largest
// companion root has the requested modulus.
inline std::vector<Eigen::MatrixXd> random_stable_var(panelbreak::SplitRng& rng, int K, int p,
                                                      double target = 0.85) {
    std::vector<Eigen::MatrixXd> A(static_cast<std::size_t>(p));
    for (auto& a : A) {
        a.resize(K, K);
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j) a(i, j) = 0.3 * rng.normal();
    }
    const auto roots = panelbreak::companion_roots(A);
    const double m = roots.max_modulus();
    if (m > target) {
        const double sc = target / m;
        for (int l = 0; l < p; ++l) A[static_cast<std::size_t>(l)] *= std::pow(sc, l + 1);
    }
    return A;
}

// Random positive-definite covariance via a lower-triangular square root.
inline Eigen::MatrixXd random_covariance(panelbreak::SplitRng& rng, int K) {
    Eigen::MatrixXd L(K, K);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) L(i, j) = (j <= i) ? 0.4 * rng.normal() : 0.0;
    for (int i = 0; i < K; ++i) L(i, i) = 0.5 + std::fabs(L(i, i));
    return L * L.transpose();
}

}  // namespace testutil
