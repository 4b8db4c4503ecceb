#pragma once

// Batch front-end plumbing: run configuration (key = value text), initial
// data presets, deterministic CSV / JSON-lines / manifest writers, and the
// snapshot reader used to re-audit stored runs.

#include <cstdint>
#include <string>
#include <vector>

#include "hsflow/diagnostics.hpp"
#include "hsflow/flow.hpp"

namespace hsflow {

struct RunSetup {
    FlowConfig cfg;
    std::string preset = "cosine";
    double cosine_amp = 0.5;
    SymMat3 constant_matrix = SymMat3::diag(1, 2, 3);
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    long trials = 100000;
    std::string initial_snapshot;  // when set, overrides the preset
};

// Parses `key = value` lines with '#' comments; unknown keys and malformed
// values raise ConfigError with the line number.
RunSetup parse_config(const std::string& text);

// Inverse of parse_config up to formatting; every double printed with 17
// significant digits so the echo round-trips exactly.
std::string config_text(const RunSetup& setup);

// Initial coefficient field for the configured preset (or stored snapshot).
Mat3Field initial_data(const RunSetup& setup);
Mat3Field make_preset(const std::string& name, const CircleGrid& grid,
                      double cosine_amp, const SymMat3& constant_matrix);

std::string fmt17(double x);

// One series.csv line; the first columns mirror DiagnosticsRecord, the rest
// are gauge-side monitors computed per snapshot.
struct SeriesRow {
    DiagnosticsRecord rec;
    double riccati_envelope = 0;
    double cohom_drift_max = 0;
    double qhat_dist = 0;
    double qhat_prime_inf = 0;
    double curv_max = 0;
};

extern const char* const series_header;
std::string series_line(const SeriesRow& row);

// Builds the gauge-side columns for every record/snapshot pair of a run.
std::vector<SeriesRow> assemble_series(const std::vector<FlowState>& snapshots,
                                       const std::vector<DiagnosticsRecord>& records,
                                       const Mat3Field& alpha0, Scheme scheme);

// Record-level theorem checks (monotone volume, trace bound, eigenvalue
// sandwich, Riccati envelope, conservation, structure preservation).
struct CheckResult {
    std::string name;
    bool ok;
    double value;   // measured worst case
    double bound;
};
std::vector<CheckResult> check_series(const std::vector<SeriesRow>& rows);

void write_series(const std::string& path, const std::vector<SeriesRow>& rows);
void write_snapshots(const std::string& path, const std::vector<FlowState>& snapshots,
                     Scheme scheme);
void write_manifest(const std::string& path, const RunSetup& setup);

// Reads snapshots.jsonl back into states (consecutive lines with equal t
// form one snapshot).
std::vector<FlowState> read_snapshots(const std::string& path);

// Subcommand drivers; exit status 0 = all checks pass, 1 = an audit check
// failed, 2 = error.
int cmd_run(const RunSetup& setup);
int cmd_audit(const RunSetup& setup, const std::string& snapshots_path);
int cmd_predict_limit(const RunSetup& setup);
int cmd_lemma_fuzz(const RunSetup& setup);
int cmd_linearize_audit(const RunSetup& setup);

}  // namespace hsflow
