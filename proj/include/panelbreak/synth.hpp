#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "panelbreak/panel.hpp"

namespace panelbreak {

enum class DgpKind {
    independent_walks,
    cointegrated,
    stationary_ar,
    heterogeneous_slopes,
    vecm_calibrated,
};

std::string to_string(DgpKind k);
DgpKind dgp_kind_from_string(const std::string& s);

// Synthetic panel description. `default_spec` fills kind-appropriate
// parameter values; generate() consumes the fields as given.
struct DgpSpec {
    DgpKind kind = DgpKind::independent_walks;
    int n_entities = 20;
    int n_periods = 50;
    int first_year = 1980;
    std::uint64_t seed = 1;

    std::vector<std::string> variables = {"co2", "energy", "gdp", "pop"};

    // cointegrated / vecm_calibrated: levels relation beta (leading 1).
    // Both kinds are triangular: the non-first variables are exogenous
    // random walks and the first variable is defined by the relation plus
    // an AR(rho_resid) equilibrium deviation, so the implied first-equation
    // loading is rho_resid - 1. `loadings` records that implied vector.
    Eigen::VectorXd coint_vector;
    Eigen::VectorXd loadings;
    double rho_resid = 0.8;   // AR root of the equilibrium deviation

    double ar_coef = 0.5;     // stationary_ar
    double hetero_factor = 2.0;  // heterogeneous_slopes: slope multiplier, second half

    // Shock scales; for the triangular kinds the first entry is the
    // equilibrium-deviation innovation, the rest are the walk steps.
    Eigen::VectorXd noise_sd;
    // vecm_calibrated: AR coefficients of the walk differences (diagonal
    // entries are used, one per non-first variable).
    Eigen::MatrixXd gamma1, gamma2;
    int burn_in = 100;
};

DgpSpec default_spec(DgpKind kind);

// Deterministic given (spec, seed); entity i draws from an independent
// substream, so entity-parallel generation would be bit-identical.
PanelDataset generate(const DgpSpec& spec);

}  // namespace panelbreak
