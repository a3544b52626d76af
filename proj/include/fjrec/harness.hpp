#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fjrec/content.hpp"
#include "fjrec/dynamics.hpp"
#include "fjrec/metrics.hpp"
#include "fjrec/scenario.hpp"
#include "fjrec/validation.hpp"

namespace fjrec {

// Network, system matrices and scheduled corpus resolved from a config. Immutable once
// built; a sweep shares one instance across all of its runs.
struct PreparedScenario {
    Network network;
    SystemMatrices matrices;
    std::optional<Corpus> corpus;  // discrete mode only, already scheduled
    std::string network_type;      // "a", "b" or "file"
};

PreparedScenario prepare_scenario(const ScenarioConfig& cfg);

struct RunDiagnostics {
    std::optional<double> spectral_radius;  // model-free closed loop at age 0 (delta = 0 only)
    std::vector<std::string> warnings;
    int empty_steps = 0;                    // discrete steps with no eligible content
    int qp_iterations = 0;                  // summed over all MPC solves
    double max_kkt_residual = 0.0;
};

struct RunResult {
    Trajectory trajectory;
    RunMetrics metrics;
    RunDiagnostics diagnostics;
};

// Closed loop for tau steps. Any failure is rethrown as RunError carrying the time step.
RunResult run_scenario(const ScenarioConfig& cfg, const PreparedScenario& prepared);
RunResult run_scenario(const ScenarioConfig& cfg);

struct SweepEntry {
    double rho = 0.0;
    std::optional<RunMetrics> metrics;
    std::optional<std::string> error;
};

struct SweepReport {
    std::vector<SweepEntry> entries;  // ordered by rho
    std::vector<ParetoPoint> pareto;  // successful runs only
};

// Inclusive grid rho_min + k * rho_step, k = 0..floor((rho_max - rho_min) / rho_step + 1e-9).
std::vector<double> rho_grid(double rho_min, double rho_max, double rho_step);

// One run per grid value, everything except rho frozen. Runs execute on `jobs` worker
// threads; results are stored by grid index so the report does not depend on jobs.
// With write_runs, each run also writes its own directory under cfg.output_dir.
SweepReport run_sweep(const ScenarioConfig& cfg, double rho_min, double rho_max, double rho_step, int jobs = 1,
                      bool write_runs = false);

// Network invariants, model-free spectral radius and H-matrix definiteness at every
// rho in `rhos` (the config's own rho when empty), the model-based steady state and
// corpus statistics.
ValidationReport validate_scenario(const ScenarioConfig& cfg, const std::vector<double>& rhos = {});
ValidationReport validate_scenario(const ScenarioConfig& cfg, const PreparedScenario& prepared,
                                   const std::vector<double>& rhos = {});

std::string run_id(const ScenarioConfig& cfg);
nlohmann::json metrics_json(const RunResult& result, const ScenarioConfig& cfg, const PreparedScenario& prepared);

// <output_dir>/<run_id>/{trajectory.csv, metrics.json, validation.json}; returns the run directory.
std::filesystem::path write_run(const RunResult& result, const ScenarioConfig& cfg, const PreparedScenario& prepared,
                                const ValidationReport& validation);

// rho,misinformation,engagement_cost_mean,engagement_cost_median,sentiment_shift_mean,
// sentiment_shift_median,non_dominated,error
void write_sweep_csv(const SweepReport& report, std::ostream& out);

}  // namespace fjrec
