#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blk/analysis.hpp"
#include "blk/dynamics.hpp"

namespace blk {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_blowup = 3;
inline constexpr int exit_io = 4;
inline constexpr int exit_hypothesis = 5;

/// Flat run configuration; serializes to `key = value` text, one key per
/// line. Unknown keys are rejected by name.
struct RunConfig {
    std::string preset;  // empty, or the preset the remaining fields came from
    std::string kind = "rectangle";
    double L = M_PI;
    double B = M_PI;
    int nx = 128;
    int n_modes = 8;
    double weight_k = 0.0;
    double gamma = 1.0;
    double dt = 2e-4;
    double t_end = 1.0;
    double theta = 0.5;
    int diag_every = 10;
    bool dealias = true;
    bool nonlinear = true;
    std::string profile = "rect_poly";
    double amplitude = 1.0;
    int mode_j = 1;
    double sigma = 1.0;
    double blowup_factor = 1e6;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
};

/// Experiment presets reproducing the decay theorems (one table, see
/// runner.cpp). Names: thm61, thm62, thm63, thm64, unstable.
RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

Geometry make_geometry(const RunConfig& cfg);
PhysicalParams make_params(const RunConfig& cfg);
SolverConfig make_solver_config(const RunConfig& cfg);
InitialSpec make_initial_spec(const RunConfig& cfg);

/// Versioned CSV: `# blk-diagnostics v1` + fixed column header. Readers
/// reject other versions.
void write_diagnostics_csv(const std::string& path, const DiagnosticsSeries& series);
DiagnosticsSeries read_diagnostics_csv(const std::string& path);

/// Executes the configured run; writes diagnostics.csv and summary.json
/// under out_dir. Returns exit_ok, exit_blowup, or exit_io.
int cmd_run(const RunConfig& cfg, const std::string& out_dir);

/// Runs a theorem preset and verifies the decay envelope; writes
/// decay_report.json. exit_ok iff the pointwise bound (and, for thm63,
/// the comparison monitor and truncation diagnostic) holds;
/// exit_hypothesis when the theorem hypotheses are not met.
int cmd_decay(const RunConfig& cfg, const std::string& out_dir);

/// Property sweep over `count` seeded random compatible fields; writes
/// inequalities.json with per-check pass counts. exit_ok iff all pass.
int cmd_verify_inequalities(std::uint64_t seed, int count, const std::string& out_dir);

struct ConvergenceOptions {
    std::vector<int> nx_levels{64, 128, 256};
    std::vector<double> dt_levels{1e-3, 5e-4, 2.5e-4};
    double dt_spatial = 2e-5;
    int nx_temporal = 128;
    double t_end = 0.1;
    double gamma = 1.0;
    int n_modes = 4;
    double amplitude = 1.0;
    double min_order = 1.9;
};

struct ConvergenceReport {
    std::vector<double> spatial_h, spatial_err, spatial_orders;
    std::vector<double> temporal_dt, temporal_diff;
    std::vector<double> temporal_orders;
    double spatial_order_min = 0.0;
    double temporal_order_min = 0.0;
    bool pass = false;
};

ConvergenceReport run_convergence_ladder(const ConvergenceOptions& opts);

/// Runs the manufactured-solution ladder; writes convergence.json.
/// exit_ok iff observed spatial and temporal orders meet min_order;
/// exit_config when fewer than three levels are supplied.
int cmd_convergence(const ConvergenceOptions& opts, const std::string& out_dir);

}  // namespace blk
