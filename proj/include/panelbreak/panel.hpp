#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "panelbreak/errors.hpp"

namespace panelbreak {

// Contiguous slice of one entity's series. Views never contain interior
/// missing values: they are cut from maximal observed runs.
struct SeriesView {
    std::string entity;
    std::string variable;
    std::vector<double> data;
    int first_year = 0;

    std::size_t size() const { return data.size(); }
};

struct Observation {
    std::string entity;
    int year = 0;
    std::string variable;
    double value = 0.0;
};

struct PanelOptions {
    // Minimal contiguous run an entity must have for every gating variable;
    // entities falling short are excluded (and the exclusion logged).
    int min_obs = 10;
    // Variables whose runs gate inclusion. Empty means: all variables.
    std::vector<std::string> gating_variables;
};

// Immutable rectangular panel: entities x contiguous years x variables, with
// an observation mask. Entities are stored canonically sorted so that input
// order never influences results. All mutating operations return new values.
class PanelDataset {
public:
    PanelDataset() = default;

    static PanelDataset from_observations(const std::vector<std::string>& variables,
                                          const std::vector<Observation>& observations,
                                          const PanelOptions& options = {});

    const std::vector<std::string>& entities() const { return entities_; }
    const std::vector<std::string>& variables() const { return variables_; }
    int year_start() const { return year_start_; }
    int year_end() const { return year_start_ + n_years_ - 1; }
    int n_years() const { return n_years_; }
    std::size_t n_entities() const { return entities_.size(); }

    bool has_variable(const std::string& name) const;
    std::size_t variable_index(const std::string& name) const;  // throws UnknownVariable
    std::size_t entity_index(const std::string& name) const;    // throws UnknownVariable

    bool observed(std::size_t entity, int year, std::size_t variable) const;
    double value(std::size_t entity, int year, std::size_t variable) const;

    // Longest contiguous observed run for (entity, variable); ties broken
    // toward the most recent run. Empty optional when nothing is observed.
    std::optional<SeriesView> series(const std::string& entity, const std::string& variable) const;

    // series() for every entity, keeping runs of at least min_len points.
    // Entities without a long-enough run are reported in `dropped` when given.
    std::vector<SeriesView> usable_series(const std::string& variable, std::size_t min_len,
                                          std::vector<std::string>* dropped = nullptr) const;

    // New dataset with one extra variable. `values`/`observed` are indexed
    // [entity][year offset] and must match the panel's shape.
    PanelDataset with_variable(const std::string& name,
                               const std::vector<std::vector<double>>& values,
                               const std::vector<std::vector<bool>>& observed_mask) const;

    // New dataset with `variable` replaced by log(variable). Requires all
    // observed values strictly positive.
    PanelDataset with_log_variable(const std::string& variable) const;

    bool operator==(const PanelDataset& other) const;

    // Human-readable construction notes (entity exclusions and their reasons).
    const std::vector<std::string>& notes() const { return notes_; }

private:
    std::size_t cell(std::size_t e, std::size_t y, std::size_t v) const {
        return (e * static_cast<std::size_t>(n_years_) + y) * variables_.size() + v;
    }

    std::vector<std::string> entities_;
    std::vector<std::string> variables_;
    int year_start_ = 0;
    int n_years_ = 0;
    std::vector<double> values_;
    std::vector<unsigned char> mask_;
    std::vector<std::string> notes_;
};

// Aligned multi-variable slice of one entity: the longest contiguous run of
// years over which every listed variable is observed (ties toward the most
// recent run). One column per variable, equal lengths.
struct FrameView {
    std::string entity;
    std::vector<std::string> variables;
    std::vector<std::vector<double>> columns;
    int first_year = 0;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

std::optional<FrameView> entity_frame(const PanelDataset& p, const std::string& entity,
                                      const std::vector<std::string>& variables);

// out[t] = in[t+1] - in[t]; length shrinks by one, first_year advances.
SeriesView first_difference(const SeriesView& s);

// Drops the last k points so that pairing lag(s, k) with the last size()-k
// points of s yields (x_{t-k}, x_t) pairs. lag(s, 0) is the identity.
SeriesView lag(const SeriesView& s, int k);

// Removes each entity's own mean of `variable` (over observed cells).
PanelDataset within_demean(const PanelDataset& p, const std::string& variable);

}  // namespace panelbreak
