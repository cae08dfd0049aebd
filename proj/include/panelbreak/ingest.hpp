#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "panelbreak/panel.hpp"
#include "panelbreak/stats.hpp"

namespace panelbreak {

// ---------------------------------------------------------------------------
// Long-format CSV interchange: header `entity,year,variable,value`, one
// observation per row, empty value field = missing (masked).
// ---------------------------------------------------------------------------

// Parse a long-format CSV. `mapping` renames file-level variable names to
// canonical ones (file name -> canonical); when non-empty, every variable
// appearing in the file must be mapped (UnmappedVariable otherwise). An
// empty mapping accepts all variable names verbatim.
//
// Errors: IoError (unreadable file), MalformedRow (bad field count, year or
// value; line numbers are 1-based and include the header line),
// DuplicateObservation (repeated entity/year/variable), UnmappedVariable.
PanelDataset parse_long_csv(const std::string& path,
                            const std::map<std::string, std::string>& mapping = {},
                            const PanelOptions& options = {});

// Persist a panel in the same long format, observed cells only, with
// round-trip-exact numeric formatting.
void write_long_csv(const PanelDataset& panel, const std::string& path);

// Add a policy indicator: 1 for every year >= threshold_year, 0 before,
// identical across entities and observed everywhere. The threshold must lie
// inside the panel's year range (ThresholdOutOfRange otherwise).
PanelDataset build_policy_dummy(const PanelDataset& panel, const std::string& name,
                                int threshold_year);

// ---------------------------------------------------------------------------
// Run configuration: flat `key = value` text file, '#' starts a comment line.
// ---------------------------------------------------------------------------

struct RunConfig {
    std::string input;                 // long CSV path (required)
    std::string output_dir = "out";    // report bundle directory

    // canonical variable -> name used in the input file (defaults: identity)
    std::map<std::string, std::string> variable_map = {
        {"co2", "co2"}, {"energy", "energy"}, {"gdp", "gdp"}, {"pop", "pop"}};

    int year_start = 0;  // 0 = use the file's own range
    int year_end = 0;

    // canonical variable -> apply natural log on ingest
    std::map<std::string, bool> log_flags = {
        {"co2", false}, {"energy", false}, {"gdp", false}, {"pop", false}};

    std::string dummy_name = "break2015";
    int dummy_threshold_year = 2015;

    int lag_order = 2;
    int rank = 1;
    int min_obs = 10;
    std::uint64_t seed = 42;

    std::vector<std::string> emit = {"csv", "markdown", "json"};
    std::string estimator = "two_step";  // or "johansen"

    int irf_horizon = 24;
    std::vector<double> irf_scales = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};

    // Deterministic specification for level unit-root tests (differences
    // always use a constant). Also used for the cointegration first stage.
    stats::Deterministic deterministic_levels = stats::Deterministic::constant;

    // Include the policy indicator among the cointegration first-stage
    // regressors. Off by default: the reference moments assume stochastic
    // regressors only.
    bool pedroni_include_dummy = false;
};

// Load and validate a config file. Unknown keys are rejected so typos
// cannot silently fall back to defaults. Throws InvalidSpec with the
// offending line, or IoError.
RunConfig load_config(const std::string& path);

// Structural checks shared by load_config and programmatic construction:
// estimator/emit/scale enumerations, ordering of the year range, positive
// horizon, rank/lag sanity. Throws InvalidSpec.
void validate_config(const RunConfig& cfg);

// Canonical serialization (sorted keys, full precision) — the hashing and
// metadata base. Two configs with equal behavior serialize identically.
std::string canonical_config_text(const RunConfig& cfg);

// FNV-1a 64-bit hash of canonical_config_text, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace panelbreak
