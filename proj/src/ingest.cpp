#include "panelbreak/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "panelbreak/errors.hpp"

namespace panelbreak {

using stats::Deterministic;

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

bool parse_int_strict(const std::string& s, int& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    std::size_t pos = 0;
    try {
        const long v = std::stol(t, &pos);
        if (pos != t.size()) return false;
        out = static_cast<int>(v);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_double_strict(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stod(t, &pos);
        return pos == t.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

PanelDataset parse_long_csv(const std::string& path,
                            const std::map<std::string, std::string>& mapping,
                            const PanelOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open input file '" + path + "'");

    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw MalformedRow(1, "empty file, expected header");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
        line.erase(0, 3);
    }
    if (trim(line) != "entity,year,variable,value") {
        throw MalformedRow(1, "header must be 'entity,year,variable,value'");
    }

    std::vector<Observation> obs;
    std::set<std::string> variables_seen;
    std::set<std::string> keys_seen;  // duplicate detection

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;

        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 4) {
            throw MalformedRow(line_no, "expected 4 fields, found " + std::to_string(f.size()));
        }
        const std::string entity = trim(f[0]);
        if (entity.empty()) throw MalformedRow(line_no, "empty entity");
        int year = 0;
        if (!parse_int_strict(f[1], year)) {
            throw MalformedRow(line_no, "year '" + trim(f[1]) + "' is not an integer");
        }
        std::string variable = trim(f[2]);
        if (variable.empty()) throw MalformedRow(line_no, "empty variable");
        if (!mapping.empty()) {
            const auto it = mapping.find(variable);
            if (it == mapping.end()) {
                throw UnmappedVariable("variable '" + variable + "' at line " +
                                       std::to_string(line_no) + " has no mapping");
            }
            variable = it->second;
        }

        const std::string key = entity + "\x1f" + std::to_string(year) + "\x1f" + variable;
        if (!keys_seen.insert(key).second) {
            throw DuplicateObservation("duplicate observation (" + entity + ", " +
                                       std::to_string(year) + ", " + variable + ") at line " +
                                       std::to_string(line_no));
        }

        variables_seen.insert(variable);
        const std::string value_field = trim(f[3]);
        if (value_field.empty()) continue;  // masked missing
        double value = 0.0;
        if (!parse_double_strict(value_field, value)) {
            throw MalformedRow(line_no, "value '" + value_field + "' is not numeric");
        }
        obs.push_back({entity, year, variable, value});
    }

    std::vector<std::string> variables(variables_seen.begin(), variables_seen.end());
    if (variables.empty()) throw MalformedRow(line_no, "file contains no observations");
    return PanelDataset::from_observations(variables, obs, options);
}

void write_long_csv(const PanelDataset& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file '" + path + "'");
    out << "entity,year,variable,value\n";
    char buf[40];
    for (std::size_t e = 0; e < panel.n_entities(); ++e) {
        for (int year = panel.year_start(); year <= panel.year_end(); ++year) {
            for (std::size_t v = 0; v < panel.variables().size(); ++v) {
                if (!panel.observed(e, year, v)) continue;
                std::snprintf(buf, sizeof(buf), "%.17g", panel.value(e, year, v));
                out << panel.entities()[e] << ',' << year << ',' << panel.variables()[v] << ','
                    << buf << '\n';
            }
        }
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

PanelDataset build_policy_dummy(const PanelDataset& panel, const std::string& name,
                                int threshold_year) {
    if (threshold_year < panel.year_start() || threshold_year > panel.year_end()) {
        throw ThresholdOutOfRange("threshold year " + std::to_string(threshold_year) +
                                  " outside panel range [" + std::to_string(panel.year_start()) +
                                  ", " + std::to_string(panel.year_end()) + "]");
    }
    const std::size_t n_years = static_cast<std::size_t>(panel.n_years());
    std::vector<double> row(n_years, 0.0);
    for (std::size_t y = 0; y < n_years; ++y) {
        row[y] = (panel.year_start() + static_cast<int>(y)) >= threshold_year ? 1.0 : 0.0;
    }
    std::vector<std::vector<double>> values(panel.n_entities(), row);
    std::vector<std::vector<bool>> observed(panel.n_entities(),
                                            std::vector<bool>(n_years, true));
    return panel.with_variable(name, values, observed);
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kCanonical = {"co2", "energy", "gdp", "pop"};

bool parse_bool(const std::string& v, bool& out) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") { out = true; return true; }
    if (v == "false" || v == "0" || v == "no" || v == "off") { out = false; return true; }
    return false;
}

Deterministic parse_deterministic(const std::string& v, int line_no) {
    if (v == "none") return Deterministic::none;
    if (v == "constant") return Deterministic::constant;
    if (v == "constant_trend") return Deterministic::constant_trend;
    throw InvalidSpec("config line " + std::to_string(line_no) +
                      ": deterministic_levels must be none, constant or constant_trend");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : v) {
        if (c == ',') {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(trim(cur));
    parts.erase(std::remove(parts.begin(), parts.end(), std::string()), parts.end());
    return parts;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");

    RunConfig cfg;
    std::set<std::string> keys_seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw InvalidSpec("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw InvalidSpec("config line " + std::to_string(line_no) + ": empty key");
        }
        if (!keys_seen.insert(key).second) {
            throw InvalidSpec("config line " + std::to_string(line_no) + ": duplicate key '" +
                              key + "'");
        }

        auto bad_value = [&](const std::string& what) -> InvalidSpec {
            return InvalidSpec("config line " + std::to_string(line_no) + ": " + key + " " + what);
        };
        auto as_int = [&](int min_allowed) {
            int v = 0;
            if (!parse_int_strict(value, v) || v < min_allowed) {
                throw bad_value("must be an integer >= " + std::to_string(min_allowed));
            }
            return v;
        };
        auto as_bool = [&]() {
            bool v = false;
            if (!parse_bool(value, v)) throw bad_value("must be true or false");
            return v;
        };

        if (key == "input") {
            cfg.input = value;
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key.rfind("map.", 0) == 0) {
            const std::string canon = key.substr(4);
            if (std::find(kCanonical.begin(), kCanonical.end(), canon) == kCanonical.end()) {
                throw bad_value("maps unknown canonical variable '" + canon + "'");
            }
            if (value.empty()) throw bad_value("must name the input variable");
            cfg.variable_map[canon] = value;
        } else if (key.rfind("log.", 0) == 0) {
            const std::string canon = key.substr(4);
            if (std::find(kCanonical.begin(), kCanonical.end(), canon) == kCanonical.end()) {
                throw bad_value("flags unknown canonical variable '" + canon + "'");
            }
            cfg.log_flags[canon] = as_bool();
        } else if (key == "year_start") {
            cfg.year_start = as_int(1);
        } else if (key == "year_end") {
            cfg.year_end = as_int(1);
        } else if (key == "dummy.name") {
            if (value.empty()) throw bad_value("must be non-empty");
            cfg.dummy_name = value;
        } else if (key == "dummy.threshold_year") {
            cfg.dummy_threshold_year = as_int(1);
        } else if (key == "lag_order") {
            cfg.lag_order = as_int(1);
        } else if (key == "rank") {
            cfg.rank = as_int(1);
        } else if (key == "min_obs") {
            cfg.min_obs = as_int(1);
        } else if (key == "seed") {
            int v = as_int(0);
            cfg.seed = static_cast<std::uint64_t>(v);
        } else if (key == "emit") {
            cfg.emit = split_list(value);
            if (cfg.emit.empty()) throw bad_value("must list at least one format");
        } else if (key == "estimator") {
            cfg.estimator = value;
        } else if (key == "irf_horizon") {
            cfg.irf_horizon = as_int(1);
        } else if (key == "irf_scales") {
            cfg.irf_scales.clear();
            for (const std::string& part : split_list(value)) {
                double d = 0.0;
                if (!parse_double_strict(part, d)) {
                    throw bad_value("contains non-numeric scale '" + part + "'");
                }
                cfg.irf_scales.push_back(d);
            }
            if (cfg.irf_scales.empty()) throw bad_value("must list at least one scale");
        } else if (key == "deterministic_levels") {
            cfg.deterministic_levels = parse_deterministic(value, line_no);
        } else if (key == "pedroni_include_dummy") {
            cfg.pedroni_include_dummy = as_bool();
        } else {
            throw InvalidSpec("config line " + std::to_string(line_no) + ": unknown key '" + key +
                              "'");
        }
    }

    validate_config(cfg);
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    if (cfg.input.empty()) throw InvalidSpec("config: input is required");
    if (cfg.output_dir.empty()) throw InvalidSpec("config: output_dir is required");
    for (const std::string& canon : kCanonical) {
        const auto it = cfg.variable_map.find(canon);
        if (it == cfg.variable_map.end() || it->second.empty()) {
            throw InvalidSpec("config: canonical variable '" + canon + "' is not mapped");
        }
    }
    if (cfg.year_start != 0 && cfg.year_end != 0 && cfg.year_start > cfg.year_end) {
        throw InvalidSpec("config: year_start exceeds year_end");
    }
    if ((cfg.year_start == 0) != (cfg.year_end == 0)) {
        throw InvalidSpec("config: set both year_start and year_end or neither");
    }
    if (cfg.year_start != 0 && (cfg.dummy_threshold_year < cfg.year_start ||
                                cfg.dummy_threshold_year > cfg.year_end)) {
        throw InvalidSpec("config: dummy.threshold_year outside the configured year range");
    }
    if (cfg.estimator != "two_step" && cfg.estimator != "johansen") {
        throw InvalidSpec("config: estimator must be two_step or johansen");
    }
    for (const std::string& f : cfg.emit) {
        if (f != "csv" && f != "markdown" && f != "json") {
            throw InvalidSpec("config: emit format '" + f + "' not one of csv, markdown, json");
        }
    }
    const int k = 4;  // canonical system size
    if (cfg.rank < 1 || cfg.rank >= k) {
        throw InvalidSpec("config: rank must satisfy 1 <= r < K (K=" + std::to_string(k) + ")");
    }
    if (cfg.lag_order < 1) throw InvalidSpec("config: lag_order must be >= 1");
    if (cfg.irf_horizon < 1) throw InvalidSpec("config: irf_horizon must be >= 1");
    for (double s : cfg.irf_scales) {
        if (s == 0.0) throw InvalidSpec("config: irf_scales must be non-zero");
    }
    if (cfg.deterministic_levels == Deterministic::none) {
        throw InvalidSpec(
            "config: deterministic_levels must include at least a constant; the stage suite "
            "runs tests that are undefined without one");
    }
    if (cfg.dummy_name.empty()) throw InvalidSpec("config: dummy.name must be non-empty");
    for (const std::string& canon : kCanonical) {
        if (cfg.dummy_name == canon) {
            throw InvalidSpec("config: dummy.name collides with a canonical variable");
        }
    }
}

std::string canonical_config_text(const RunConfig& cfg) {
    std::ostringstream out;
    out << "deterministic_levels = " << stats::to_string(cfg.deterministic_levels) << '\n';
    out << "dummy.name = " << cfg.dummy_name << '\n';
    out << "dummy.threshold_year = " << cfg.dummy_threshold_year << '\n';
    out << "emit = ";
    for (std::size_t i = 0; i < cfg.emit.size(); ++i) out << (i ? "," : "") << cfg.emit[i];
    out << '\n';
    out << "estimator = " << cfg.estimator << '\n';
    out << "input = " << cfg.input << '\n';
    out << "irf_horizon = " << cfg.irf_horizon << '\n';
    out << "irf_scales = ";
    char buf[40];
    for (std::size_t i = 0; i < cfg.irf_scales.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", cfg.irf_scales[i]);
        out << (i ? "," : "") << buf;
    }
    out << '\n';
    out << "lag_order = " << cfg.lag_order << '\n';
    for (const auto& [canon, flag] : cfg.log_flags) {
        out << "log." << canon << " = " << (flag ? "true" : "false") << '\n';
    }
    for (const auto& [canon, name] : cfg.variable_map) {
        out << "map." << canon << " = " << name << '\n';
    }
    out << "min_obs = " << cfg.min_obs << '\n';
    out << "output_dir = " << cfg.output_dir << '\n';
    out << "pedroni_include_dummy = " << (cfg.pedroni_include_dummy ? "true" : "false") << '\n';
    out << "rank = " << cfg.rank << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "year_end = " << cfg.year_end << '\n';
    out << "year_start = " << cfg.year_start << '\n';
    return out.str();
}

std::string config_hash(const RunConfig& cfg) {
    const std::string text = canonical_config_text(cfg);
    std::uint64_t h = 1469598103934665603ULL;  // FNV offset basis
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;  // FNV prime
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace panelbreak
