#pragma once

#include <functional>
#include <memory>
#include <string>

#include "shearflow/params.hpp"
#include "shearflow/state.hpp"

namespace shearflow {

struct StepConfig {
  double dt = 1e-2;
  double t_end = 1.0;
  enum class Scheme { imex1, imex2 };
  Scheme scheme = Scheme::imex1;
  double j_min = 0.1;          // domain-collapse floor
  int history_depth = 5;
  /// Linear kinematic transport coefficient; NaN means s(0) = gamma b^2 / 2.
  double kinematic_coeff = std::numeric_limits<double>::quiet_NaN();

  void validate() const;
  double kin_coeff(const Params& p, double b) const;
};

struct ProjectionReport {
  double displacement = 0.0;  // || u0 - u0_projected ||_0
  double eta_shift = 0.0;     // mean removed from eta0
};

/// Shifts eta0 to zero mean, replaces u0 by its metric-divergence-free part
/// (Neumann-type pressure projection in flattened coordinates, u = 0 at the
/// bottom) and seeds the initial pressure from one stress-Stokes solve.
FlowState project_initial_data(const VectorVolumeField& u0,
                               const SurfaceField& eta0, const Params& params,
                               const Grid& grid, const StepConfig& cfg,
                               ProjectionReport* report = nullptr);

/// IMEX time stepper for the flattened perturbed system: the constant
/// coefficient linear operator (viscous stress, shear transport, surface
/// coupling) is implicit and mode-diagonal with cached factorizations; the
/// geometric nonlinearities G1..G4 are explicit.
class Stepper {
 public:
  Stepper(const Grid& grid, const Params& params, const StepConfig& cfg);
  ~Stepper();
  Stepper(Stepper&&) noexcept;
  Stepper& operator=(Stepper&&) noexcept;

  /// Advances the state by one step (updates history ring and deta_dt).
  void step(FlowState& state);

  const StepConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct TerminationRecord {
  enum class Reason { completed, domain_collapse, solver_failure, nan_detected };
  Reason reason = Reason::completed;
  double t_last = 0.0;
  std::string detail;
  bool ok() const { return reason == Reason::completed; }
  std::string reason_str() const;
};

struct Trajectory {
  std::vector<Snapshot> samples;  // every sample_cadence steps, plus final
  TerminationRecord term;
  double mean_drift = 0.0;  // max |int eta(t) - int eta(0)| observed
  double cfl_advisory_dt = 0.0;  // advisory only; never enforced
};

/// Advisory step size min(dx1, dx2) / (max |u| + s(0)); informational.
double cfl_advisory(const FlowState& state, const Params& params);

/// Iterates step() until t_end or error; invokes the observer every
/// sample_cadence steps (and at t = 0) with the current state.
Trajectory run(FlowState state, const StepConfig& cfg, const Params& params,
               const Grid& grid, int sample_cadence = 1,
               const std::function<void(const FlowState&)>& observer = {},
               bool keep_samples = true);

}  // namespace shearflow
