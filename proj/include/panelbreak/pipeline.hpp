#pragma once

#include <string>
#include <vector>

#include "panelbreak/ingest.hpp"

namespace panelbreak {

inline constexpr const char* kVersion = "1.0.0";

// Pipeline stages in execution order. Running "up to" a stage executes every
// earlier stage as well — downstream reports always carry the upstream
// decision context.
enum class Stage { unitroot, cointegration, vecm, dynamics, diagnostics };

std::string to_string(Stage s);
Stage stage_from_string(const std::string& s);  // throws InvalidSpec

// One table cell with its presentation class; the renderer owns the digits.
struct Cell {
    enum class Kind {
        blank,        // empty (csv/markdown), null (json)
        text,         // verbatim string
        statistic,    // 4 decimals
        pvalue,       // 4 decimals
        tratio,       // 4 decimals, bracketed
        coefficient,  // 6 significant digits
        integer,      // plain integer
    };
    Kind kind = Kind::blank;
    std::string text;
    double value = 0.0;
};

Cell cell_blank();
Cell cell_text(std::string s);
Cell cell_stat(double v);
Cell cell_pval(double v);
Cell cell_t(double v);
Cell cell_coef(double v);
Cell cell_int(long long v);

struct ReportTable {
    std::string id;       // artifact basename, e.g. "table5_fevd"
    std::string title;    // human heading
    std::string module;   // producing module name (stamped with kVersion)
    std::vector<std::string> context;  // upstream decision context lines
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct ReportBundle {
    RunConfig config;
    std::vector<ReportTable> tables;
    std::vector<std::string> notes;  // dataset assembly / stage notes

    bool failed = false;
    std::string failed_stage;
    std::string failure_message;
    int failure_exit_code = 0;  // 2 validation, 3 numeric; 0 when clean
};

// Execute ingest plus every stage up to `up_to` (inclusive). Stage errors do
// not throw: the bundle returned is partial, FAILED-marked and tagged with
// the stage and exit code. Configuration must already be validated.
ReportBundle run_pipeline(const RunConfig& cfg, Stage up_to = Stage::diagnostics);

// Serialize one table ("csv", "markdown" or "json"); header lines carry the
// module version, the config hash and the decision context.
std::string render_table(const ReportTable& table, const std::string& format,
                         const std::string& config_hash);

// Write every table in every configured format into config.output_dir, plus
// run_metadata.json (the only artifact holding a timestamp) and a FAILED
// marker when the run aborted. Creates the directory if needed.
void write_bundle(const ReportBundle& bundle);

}  // namespace panelbreak
