#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shearflow/diagnostics.hpp"
#include "shearflow/params.hpp"
#include "shearflow/stepper.hpp"

namespace shearflow {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InitialData {
  enum class Preset { equilibrium, single_mode, random_band };
  Preset preset = Preset::equilibrium;
  int k1 = 1, k2 = 0;        // single-mode indices
  double eps = 1e-3;
  std::uint64_t seed = 0;    // random-band
  int k_max = 3;
};

struct RunConfig {
  // grid
  double L1 = 2 * 3.14159265358979323846, L2 = L1, b = 1.0;
  int N1 = 16, N2 = 16, N3 = 17;
  int max_order = 8;
  // physics
  Params params;
  InitialData initial;
  StepConfig step;
  // observation
  int cadence = 10;
  int tier = 2;
  int composite_N = 0;       // 0 disables the composite accumulator
  bool write_checkpoints = false;
  double fit_t_min = 1.0;
  // orchestration
  std::string output_dir;
  bool overwrite = false;
  std::string experiment = "single";
  std::vector<double> sigmas;  // sigma sweep members, descending to 0
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string config_to_json(const RunConfig& c);

Grid make_grid(const RunConfig& c);
FlowState initial_state(const RunConfig& c, const Grid& g,
                        ProjectionReport* rep = nullptr);

struct RunResult {
  TerminationRecord term;
  std::vector<FunctionalReport> reports;
  std::vector<Snapshot> samples;
  double mean_drift = 0.0;
  double cfl_advisory_dt = 0.0;
  std::optional<FitResult> fit_exp, fit_alg;
  double composite = 0.0;
  std::string artifact_dir;
};

/// Executes one run: diagnostics CSV, JSON summary, optional checkpoints.
/// Returns the in-memory result as well.  Throws ConfigError for bad
/// configs; solver failures are reported in the termination record.
RunResult run_experiment(const RunConfig& config);

struct SweepRow {
  double sigma;
  double delta;  // sup_t (||u^s - u^0||_0 + ||eta^s - eta^0||_0)
  std::string dir;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // positive sigmas, descending
  bool complete = false;
  double max_mean_drift = 0.0;  // across all member runs
};

/// Runs the config at each sigma (descending, last must be 0) with identical
/// initial data, then tabulates trajectory distances to the sigma = 0 run.
SweepResult sweep_sigma(const RunConfig& base, std::vector<double> sigmas);

/// Writes one report stream as CSV with the stable column set.
void write_reports_csv(const std::string& path,
                       const std::vector<FunctionalReport>& reports, int tier);

std::string version_string();

}  // namespace shearflow
