#pragma once

#include "shearflow/geometry.hpp"
#include "shearflow/state.hpp"

namespace shearflow {

/// Kinematic rate u.N - s(eta) d1 eta evaluated at the surface with
/// dealiased products.
SurfaceField kinematic_rate(const VectorVolumeField& u, const SurfaceField& eta,
                            const Params& params);

/// The explicit nonlinear forcing of the constant-coefficient (flattened)
/// form, split the way the estimates split it: hat parts carry neither sigma
/// nor gamma, check parts carry sigma, tilde parts carry gamma.  All parts
/// vanish at the zero state.
struct ForcingBundle {
  VectorVolumeField momentum_hat, momentum_tilde;   // G1
  VolumeField divergence;                           // G2
  VectorSurfaceField stress_hat, stress_check, stress_tilde;  // G3
  SurfaceField kinematic_hat, kinematic_tilde;      // G4

  VectorVolumeField momentum() const;
  VectorSurfaceField stress() const;
  SurfaceField kinematic() const;
};

/// Assembles G1..G4 for the given state; the cache must be built from
/// state.eta with its deta_dt supplied.
ForcingBundle compute_G(const Snapshot& state, const GeometryCache& cache,
                        const Params& params);

/// Commutator forcing of the geometric form after applying j time
/// derivatives.  Temporal derivatives of the geometric quantities come from
/// backward differences over the history ring (uniform spacing required).
struct CommutatorForcing {
  int order = 0;
  VectorVolumeField momentum;   // F^{1,j}
  VolumeField divergence;       // F^{2,j}
  VectorSurfaceField stress;    // F^{3,j}
  SurfaceField kinematic;       // F^{4,j}
};

CommutatorForcing compute_F(const History& history, const Params& params,
                            int j, double j_min_floor = 0.1);

/// Residual fields of the governing equations at one state (needs a du_dt
/// estimate); used by the cross-form consistency checks.
struct ResidualFields {
  VectorVolumeField momentum;
  VolumeField divergence;
  VectorSurfaceField stress;
  SurfaceField kinematic;
};

/// Residual of ns_geometric at (state, du_dt): all terms evaluated with the
/// metric operators and the full curvature.
ResidualFields residual_geometric(const Snapshot& state,
                                  const VectorVolumeField& du_dt,
                                  const GeometryCache& cache,
                                  const Params& params);

/// Residual of the flattened form with Theta = G: constant-coefficient left
/// side minus the supplied forcing bundle.
ResidualFields residual_flattened(const Snapshot& state,
                                  const VectorVolumeField& du_dt,
                                  const ForcingBundle& G, const Params& params,
                                  double kinematic_coeff);

}  // namespace shearflow
