#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "panelbreak/errors.hpp"
#include "panelbreak/pipeline.hpp"

namespace panelbreak {

Cell cell_blank() { return {}; }
Cell cell_text(std::string s) {
    Cell c;
    c.kind = Cell::Kind::text;
    c.text = std::move(s);
    return c;
}
namespace {
Cell numeric_cell(Cell::Kind kind, double v) {
    Cell c;
    c.kind = kind;
    c.value = v;
    return c;
}
}  // namespace
Cell cell_stat(double v) { return numeric_cell(Cell::Kind::statistic, v); }
Cell cell_pval(double v) { return numeric_cell(Cell::Kind::pvalue, v); }
Cell cell_t(double v) { return numeric_cell(Cell::Kind::tratio, v); }
Cell cell_coef(double v) { return numeric_cell(Cell::Kind::coefficient, v); }
Cell cell_int(long long v) { return numeric_cell(Cell::Kind::integer, static_cast<double>(v)); }

std::string to_string(Stage s) {
    switch (s) {
        case Stage::unitroot: return "unitroot";
        case Stage::cointegration: return "cointegration";
        case Stage::vecm: return "vecm";
        case Stage::dynamics: return "dynamics";
        case Stage::diagnostics: return "diagnostics";
    }
    return "?";
}

Stage stage_from_string(const std::string& s) {
    if (s == "unitroot") return Stage::unitroot;
    if (s == "cointegration") return Stage::cointegration;
    if (s == "vecm") return Stage::vecm;
    if (s == "dynamics") return Stage::dynamics;
    if (s == "diagnostics") return Stage::diagnostics;
    throw InvalidSpec("unknown stage '" + s + "'");
}

namespace {

std::string format_cell(const Cell& c) {
    char buf[64];
    switch (c.kind) {
        case Cell::Kind::blank:
            return "";
        case Cell::Kind::text:
            return c.text;
        case Cell::Kind::statistic:
        case Cell::Kind::pvalue:
            std::snprintf(buf, sizeof(buf), "%.4f", c.value);
            return buf;
        case Cell::Kind::tratio:
            std::snprintf(buf, sizeof(buf), "[%.4f]", c.value);
            return buf;
        case Cell::Kind::coefficient:
            std::snprintf(buf, sizeof(buf), "%.6g", c.value);
            return buf;
        case Cell::Kind::integer:
            std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(c.value));
            return buf;
    }
    return "";
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out += "\"";
    return out;
}

std::string markdown_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '|') out += "\\|";
        else out.push_back(ch);
    }
    return out;
}

std::string render_csv(const ReportTable& t, const std::string& hash) {
    std::ostringstream out;
    out << "# table: " << t.id << '\n';
    out << "# title: " << t.title << '\n';
    out << "# module: " << t.module << ' ' << kVersion << '\n';
    out << "# config: " << hash << '\n';
    for (const std::string& line : t.context) out << "# context: " << line << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out << (i ? "," : "") << csv_escape(t.columns[i]);
    }
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << csv_escape(format_cell(row[i]));
        }
        out << '\n';
    }
    return out.str();
}

std::string render_markdown(const ReportTable& t, const std::string& hash) {
    std::ostringstream out;
    out << "# " << t.title << "\n\n";
    out << "- table: " << t.id << '\n';
    out << "- module: " << t.module << ' ' << kVersion << '\n';
    out << "- config: " << hash << '\n';
    for (const std::string& line : t.context) out << "- context: " << line << '\n';
    out << '\n';
    out << '|';
    for (const auto& c : t.columns) out << ' ' << markdown_escape(c) << " |";
    out << "\n|";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << " --- |";
    out << '\n';
    for (const auto& row : t.rows) {
        out << '|';
        for (const auto& c : row) {
            const std::string s = format_cell(c);
            out << ' ' << (s.empty() ? " " : markdown_escape(s)) << " |";
        }
        out << '\n';
    }
    return out.str();
}

std::string render_json(const ReportTable& t, const std::string& hash) {
    nlohmann::json doc;
    doc["table"] = t.id;
    doc["title"] = t.title;
    doc["module"] = t.module;
    doc["version"] = kVersion;
    doc["config_hash"] = hash;
    doc["context"] = t.context;
    doc["columns"] = t.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& c : row) {
            switch (c.kind) {
                case Cell::Kind::blank:
                    r.push_back(nullptr);
                    break;
                case Cell::Kind::text:
                    r.push_back(c.text);
                    break;
                case Cell::Kind::integer:
                    r.push_back(static_cast<long long>(c.value));
                    break;
                default:
                    r.push_back(c.value);  // lossless shortest round-trip
                    break;
            }
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

}  // namespace

std::string render_table(const ReportTable& table, const std::string& format,
                         const std::string& hash) {
    if (format == "csv") return render_csv(table, hash);
    if (format == "markdown") return render_markdown(table, hash);
    if (format == "json") return render_json(table, hash);
    throw InvalidSpec("unknown render format '" + format + "'");
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string extension_for(const std::string& format) {
    if (format == "csv") return ".csv";
    if (format == "markdown") return ".md";
    return ".json";
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm_utc{};
    gmtime_r(&tt, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace

void write_bundle(const ReportBundle& bundle) {
    namespace fs = std::filesystem;
    const fs::path dir(bundle.config.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");

    const std::string hash = config_hash(bundle.config);
    for (const auto& table : bundle.tables) {
        for (const auto& format : bundle.config.emit) {
            write_file(dir / (table.id + extension_for(format)),
                       render_table(table, format, hash));
        }
    }

    nlohmann::json meta;
    meta["generated_at"] = utc_timestamp();  // the only timestamp in the bundle
    meta["version"] = kVersion;
    meta["config_hash"] = hash;
    meta["config"] = canonical_config_text(bundle.config);
    meta["notes"] = bundle.notes;
    meta["failed"] = bundle.failed;
    if (bundle.failed) {
        meta["failed_stage"] = bundle.failed_stage;
        meta["failure_message"] = bundle.failure_message;
    }
    write_file(dir / "run_metadata.json", meta.dump(2) + "\n");

    if (bundle.failed) {
        write_file(dir / "FAILED",
                   "stage " + bundle.failed_stage + ": " + bundle.failure_message + "\n");
    } else {
        fs::remove(dir / "FAILED", ec);  // clear any stale marker from a prior run
    }
}

}  // namespace panelbreak
