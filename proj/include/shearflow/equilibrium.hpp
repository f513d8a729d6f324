#pragma once

#include "shearflow/params.hpp"
#include "shearflow/state.hpp"

namespace shearflow {

/// Parabolic shear profile s(x3) = (gamma/2)(b^2 - x3^2); s(-b) = 0.
double shear_profile(double gamma, double b, double x3);
/// s'(x3) = -gamma x3.
double shear_profile_deriv(double gamma, double b, double x3);

/// Background shear solution, stored analytically so residual checks are
/// resolution-independent.  Velocity U = s(x3) e1, pressure P = P_ext - x3.
struct Background {
  double gamma, b, P_ext;
  double U1(double x3) const { return shear_profile(gamma, b, x3); }
  double P(double x3) const { return P_ext - x3; }
};

Background background(const Params& params, const Grid& grid);

/// Zero perturbation state (the equilibrium in perturbation variables).
FlowState equilibrium_state(const Params& params, const Grid& grid,
                            int history_depth = 5);

/// Sup-norm residuals of the four governing equations evaluated at the
/// background (U, P, eta = 0) on the grid.
struct EquilibriumResidual {
  double momentum;
  double divergence;
  double stress;
  double kinematic;
  double max() const;
};

EquilibriumResidual equilibrium_residual(const Params& params,
                                         const Grid& grid);

}  // namespace shearflow
