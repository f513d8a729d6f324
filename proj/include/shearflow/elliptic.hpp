#pragma once

#include "shearflow/field.hpp"
#include "shearflow/params.hpp"

namespace shearflow {

/// Solves -sigma Lap psi + g psi = f on Sigma by exact modewise inversion
/// psi_hat = f_hat / (g + sigma |xi|^2).  sigma = 0 reduces to psi = f/g.
SurfaceField solve_capillary(const SurfaceField& f, double sigma, double g);

struct StokesSolution {
  VectorVolumeField u;
  VolumeField p;          // gauge: int p = 0 (Dirichlet), stress-pinned (stress)
  VectorVolumeField grad_p;
  // sup-norm residuals of each equation, filled on return
  double r_momentum = 0.0;
  double r_div = 0.0;
  double r_bc_top = 0.0;
  double r_bc_bottom = 0.0;
};

/// Perturbed Stokes, Dirichlet form: s d1 u + div S(p,u) = f1, div u = f2,
/// u = f3 on Sigma, u = 0 on the bottom.  Requires the compatibility
/// condition int_Omega f2 = int_Sigma f3 . e3 (checked to 1e-8 scale).
StokesSolution solve_stokes_dirichlet(const VectorVolumeField& f1,
                                      const VolumeField& f2,
                                      const VectorSurfaceField& f3,
                                      const Params& params, const Grid& grid);

/// Perturbed Stokes, stress form: S(p,u) e3 = f3 on Sigma; the stress row
/// pins the pressure constant.
StokesSolution solve_stokes_stress(const VectorVolumeField& f1,
                                   const VolumeField& f2,
                                   const VectorSurfaceField& f3,
                                   const Params& params, const Grid& grid);

}  // namespace shearflow
