#include "panelbreak/panel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace panelbreak {

namespace {

// Longest observed run for one (entity, variable) row of the mask; returns
// {start offset, length}, preferring the most recent run on ties.
std::pair<int, int> longest_run(const std::vector<unsigned char>& mask, std::size_t base,
                                std::size_t stride, int n_years) {
    int best_start = 0, best_len = 0;
    int run_start = 0, run_len = 0;
    for (int y = 0; y < n_years; ++y) {
        if (mask[base + static_cast<std::size_t>(y) * stride]) {
            if (run_len == 0) run_start = y;
            ++run_len;
            if (run_len >= best_len) {  // >= prefers later runs on ties
                best_len = run_len;
                best_start = run_start;
            }
        } else {
            run_len = 0;
        }
    }
    return {best_start, best_len};
}

}  // namespace

PanelDataset PanelDataset::from_observations(const std::vector<std::string>& variables,
                                             const std::vector<Observation>& observations,
                                             const PanelOptions& options) {
    if (variables.empty()) throw InvalidSpec("panel construction requires at least one variable");
    {
        std::set<std::string> uniq(variables.begin(), variables.end());
        if (uniq.size() != variables.size())
            throw InvalidSpec("variable names must be unique");
    }

    PanelDataset p;
    p.variables_ = variables;

    std::set<std::string> entity_set;
    int y_min = std::numeric_limits<int>::max();
    int y_max = std::numeric_limits<int>::min();
    for (const auto& o : observations) {
        entity_set.insert(o.entity);
        y_min = std::min(y_min, o.year);
        y_max = std::max(y_max, o.year);
    }
    if (entity_set.empty()) throw InsufficientData("no observations supplied");

    p.entities_.assign(entity_set.begin(), entity_set.end());  // canonical sort
    p.year_start_ = y_min;
    p.n_years_ = y_max - y_min + 1;

    const std::size_t n_cells = p.entities_.size() * static_cast<std::size_t>(p.n_years_) * variables.size();
    p.values_.assign(n_cells, std::numeric_limits<double>::quiet_NaN());
    p.mask_.assign(n_cells, 0);

    for (const auto& o : observations) {
        auto eit = std::lower_bound(p.entities_.begin(), p.entities_.end(), o.entity);
        const std::size_t e = static_cast<std::size_t>(eit - p.entities_.begin());
        auto vit = std::find(variables.begin(), variables.end(), o.variable);
        if (vit == variables.end())
            throw UnknownVariable("observation references unknown variable '" + o.variable + "'");
        const std::size_t v = static_cast<std::size_t>(vit - variables.begin());
        const std::size_t y = static_cast<std::size_t>(o.year - p.year_start_);
        const std::size_t c = p.cell(e, y, v);
        if (p.mask_[c])
            throw DuplicateObservation("duplicate observation for (" + o.entity + ", " +
                                       std::to_string(o.year) + ", " + o.variable + ")");
        p.mask_[c] = 1;
        p.values_[c] = o.value;
    }

    // Entity gate: every gating variable needs a contiguous run >= min_obs.
    const std::vector<std::string>& gating =
        options.gating_variables.empty() ? variables : options.gating_variables;
    std::vector<std::string> kept;
    std::vector<std::size_t> kept_idx;
    for (std::size_t e = 0; e < p.entities_.size(); ++e) {
        bool ok = true;
        std::string why;
        for (const auto& g : gating) {
            auto vit = std::find(variables.begin(), variables.end(), g);
            if (vit == variables.end()) throw UnknownVariable("gating variable '" + g + "' not in panel");
            const std::size_t v = static_cast<std::size_t>(vit - variables.begin());
            auto [start, len] = longest_run(p.mask_, p.cell(e, 0, v), variables.size(), p.n_years_);
            (void)start;
            if (len < options.min_obs) {
                ok = false;
                why = g + " has longest run " + std::to_string(len) + " < min_obs " +
                      std::to_string(options.min_obs);
                break;
            }
        }
        if (ok) {
            kept.push_back(p.entities_[e]);
            kept_idx.push_back(e);
        } else {
            p.notes_.push_back("excluded entity " + p.entities_[e] + ": " + why);
        }
    }
    if (kept.size() != p.entities_.size()) {
        std::vector<double> values;
        std::vector<unsigned char> mask;
        values.reserve(kept.size() * static_cast<std::size_t>(p.n_years_) * variables.size());
        mask.reserve(values.capacity());
        for (std::size_t ke : kept_idx) {
            const std::size_t b = p.cell(ke, 0, 0);
            const std::size_t row = static_cast<std::size_t>(p.n_years_) * variables.size();
            values.insert(values.end(), p.values_.begin() + b, p.values_.begin() + b + row);
            mask.insert(mask.end(), p.mask_.begin() + b, p.mask_.begin() + b + row);
        }
        p.entities_ = std::move(kept);
        p.values_ = std::move(values);
        p.mask_ = std::move(mask);
    }
    if (p.entities_.empty())
        throw InsufficientData("all entities excluded by the min_obs rule");
    return p;
}

bool PanelDataset::has_variable(const std::string& name) const {
    return std::find(variables_.begin(), variables_.end(), name) != variables_.end();
}

std::size_t PanelDataset::variable_index(const std::string& name) const {
    auto it = std::find(variables_.begin(), variables_.end(), name);
    if (it == variables_.end()) throw UnknownVariable("unknown variable '" + name + "'");
    return static_cast<std::size_t>(it - variables_.begin());
}

std::size_t PanelDataset::entity_index(const std::string& name) const {
    auto it = std::lower_bound(entities_.begin(), entities_.end(), name);
    if (it == entities_.end() || *it != name) throw UnknownVariable("unknown entity '" + name + "'");
    return static_cast<std::size_t>(it - entities_.begin());
}

bool PanelDataset::observed(std::size_t entity, int year, std::size_t variable) const {
    if (year < year_start_ || year > year_end()) return false;
    return mask_[cell(entity, static_cast<std::size_t>(year - year_start_), variable)] != 0;
}

double PanelDataset::value(std::size_t entity, int year, std::size_t variable) const {
    return values_[cell(entity, static_cast<std::size_t>(year - year_start_), variable)];
}

std::optional<SeriesView> PanelDataset::series(const std::string& entity,
                                               const std::string& variable) const {
    const std::size_t e = entity_index(entity);
    const std::size_t v = variable_index(variable);
    auto [start, len] = longest_run(mask_, cell(e, 0, v), variables_.size(), n_years_);
    if (len == 0) return std::nullopt;
    SeriesView s;
    s.entity = entity;
    s.variable = variable;
    s.first_year = year_start_ + start;
    s.data.resize(static_cast<std::size_t>(len));
    for (int t = 0; t < len; ++t)
        s.data[static_cast<std::size_t>(t)] = values_[cell(e, static_cast<std::size_t>(start + t), v)];
    return s;
}

std::optional<FrameView> entity_frame(const PanelDataset& p, const std::string& entity,
                                      const std::vector<std::string>& variables) {
    const std::size_t e = p.entity_index(entity);
    std::vector<std::size_t> vidx;
    vidx.reserve(variables.size());
    for (const auto& v : variables) vidx.push_back(p.variable_index(v));

    int best_start = 0, best_len = 0, run_start = 0, run_len = 0;
    for (int y = 0; y < p.n_years(); ++y) {
        bool all = true;
        for (std::size_t v : vidx) {
            if (!p.observed(e, p.year_start() + y, v)) {
                all = false;
                break;
            }
        }
        if (all) {
            if (run_len == 0) run_start = y;
            ++run_len;
            if (run_len >= best_len) {  // >= prefers later runs on ties
                best_len = run_len;
                best_start = run_start;
            }
        } else {
            run_len = 0;
        }
    }
    if (best_len == 0) return std::nullopt;

    FrameView f;
    f.entity = entity;
    f.variables = variables;
    f.first_year = p.year_start() + best_start;
    f.columns.resize(vidx.size());
    for (std::size_t c = 0; c < vidx.size(); ++c) {
        f.columns[c].resize(static_cast<std::size_t>(best_len));
        for (int r = 0; r < best_len; ++r) {
            f.columns[c][static_cast<std::size_t>(r)] = p.value(e, f.first_year + r, vidx[c]);
        }
    }
    return f;
}

std::vector<SeriesView> PanelDataset::usable_series(const std::string& variable, std::size_t min_len,
                                                    std::vector<std::string>* dropped) const {
    std::vector<SeriesView> out;
    for (const auto& e : entities_) {
        auto s = series(e, variable);
        if (s && s->size() >= min_len) {
            out.push_back(std::move(*s));
        } else if (dropped) {
            std::ostringstream msg;
            msg << e << ": " << variable << " run of " << (s ? s->size() : 0) << " < required "
                << min_len;
            dropped->push_back(msg.str());
        }
    }
    return out;
}

PanelDataset PanelDataset::with_variable(const std::string& name,
                                         const std::vector<std::vector<double>>& values,
                                         const std::vector<std::vector<bool>>& observed_mask) const {
    if (has_variable(name)) throw InvalidSpec("variable '" + name + "' already exists");
    if (values.size() != entities_.size() || observed_mask.size() != entities_.size())
        throw ShapeMismatch("with_variable: entity dimension mismatch");

    PanelDataset p;
    p.entities_ = entities_;
    p.variables_ = variables_;
    p.variables_.push_back(name);
    p.year_start_ = year_start_;
    p.n_years_ = n_years_;
    p.notes_ = notes_;
    const std::size_t nv_old = variables_.size();
    const std::size_t nv_new = p.variables_.size();
    p.values_.assign(entities_.size() * static_cast<std::size_t>(n_years_) * nv_new,
                     std::numeric_limits<double>::quiet_NaN());
    p.mask_.assign(p.values_.size(), 0);
    for (std::size_t e = 0; e < entities_.size(); ++e) {
        if (values[e].size() != static_cast<std::size_t>(n_years_) ||
            observed_mask[e].size() != static_cast<std::size_t>(n_years_))
            throw ShapeMismatch("with_variable: year dimension mismatch");
        for (std::size_t y = 0; y < static_cast<std::size_t>(n_years_); ++y) {
            for (std::size_t v = 0; v < nv_old; ++v) {
                const std::size_t src = cell(e, y, v);
                const std::size_t dst = (e * static_cast<std::size_t>(n_years_) + y) * nv_new + v;
                p.values_[dst] = values_[src];
                p.mask_[dst] = mask_[src];
            }
            const std::size_t dst = (e * static_cast<std::size_t>(n_years_) + y) * nv_new + nv_old;
            if (observed_mask[e][y]) {
                p.values_[dst] = values[e][y];
                p.mask_[dst] = 1;
            }
        }
    }
    return p;
}

PanelDataset PanelDataset::with_log_variable(const std::string& variable) const {
    const std::size_t v = variable_index(variable);
    PanelDataset p = *this;
    for (std::size_t e = 0; e < entities_.size(); ++e) {
        for (std::size_t y = 0; y < static_cast<std::size_t>(n_years_); ++y) {
            const std::size_t c = cell(e, y, v);
            if (!p.mask_[c]) continue;
            if (!(p.values_[c] > 0.0))
                throw InvalidSpec("log transform of '" + variable + "' requires positive values");
            p.values_[c] = std::log(p.values_[c]);
        }
    }
    return p;
}

bool PanelDataset::operator==(const PanelDataset& other) const {
    if (entities_ != other.entities_ || variables_ != other.variables_ ||
        year_start_ != other.year_start_ || n_years_ != other.n_years_ ||
        mask_ != other.mask_)
        return false;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!mask_[i]) continue;
        if (values_[i] != other.values_[i]) return false;
    }
    return true;
}

SeriesView first_difference(const SeriesView& s) {
    if (s.size() < 2) throw SeriesTooShort("first_difference needs length >= 2");
    SeriesView out;
    out.entity = s.entity;
    out.variable = s.variable;
    out.first_year = s.first_year + 1;
    out.data.resize(s.size() - 1);
    for (std::size_t t = 0; t + 1 < s.size(); ++t) out.data[t] = s.data[t + 1] - s.data[t];
    return out;
}

SeriesView lag(const SeriesView& s, int k) {
    if (k < 0) throw InvalidSpec("lag order must be non-negative");
    if (static_cast<std::size_t>(k) >= s.size()) throw SeriesTooShort("lag exceeds series length");
    SeriesView out;
    out.entity = s.entity;
    out.variable = s.variable;
    out.first_year = s.first_year;
    out.data.assign(s.data.begin(), s.data.end() - k);
    return out;
}

PanelDataset within_demean(const PanelDataset& p, const std::string& variable) {
    const std::size_t v = p.variable_index(variable);
    std::vector<std::vector<double>> values(p.n_entities());
    std::vector<std::vector<bool>> mask(p.n_entities());
    for (std::size_t e = 0; e < p.n_entities(); ++e) {
        values[e].assign(static_cast<std::size_t>(p.n_years()), 0.0);
        mask[e].assign(static_cast<std::size_t>(p.n_years()), false);
        double sum = 0.0;
        int count = 0;
        for (int y = p.year_start(); y <= p.year_end(); ++y) {
            if (!p.observed(e, y, v)) continue;
            sum += p.value(e, y, v);
            ++count;
        }
        const double mean = count > 0 ? sum / count : 0.0;
        for (int y = p.year_start(); y <= p.year_end(); ++y) {
            if (!p.observed(e, y, v)) continue;
            values[e][static_cast<std::size_t>(y - p.year_start())] = p.value(e, y, v) - mean;
            mask[e][static_cast<std::size_t>(y - p.year_start())] = true;
        }
    }

    // Rebuild with the demeaned column in place of the original.
    std::vector<Observation> obs;
    for (std::size_t e = 0; e < p.n_entities(); ++e) {
        for (int y = p.year_start(); y <= p.year_end(); ++y) {
            for (std::size_t w = 0; w < p.variables().size(); ++w) {
                if (!p.observed(e, y, w)) continue;
                double val = (w == v) ? values[e][static_cast<std::size_t>(y - p.year_start())]
                                      : p.value(e, y, w);
                obs.push_back({p.entities()[e], y, p.variables()[w], val});
            }
        }
    }
    PanelOptions keep_all;
    keep_all.min_obs = 0;
    return PanelDataset::from_observations(p.variables(), obs, keep_all);
}

}  // namespace panelbreak
