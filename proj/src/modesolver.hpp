#pragma once

#include <Eigen/Dense>

#include "shearflow/field.hpp"
#include "shearflow/params.hpp"

namespace shearflow::detail {

// Per-horizontal-mode Chebyshev collocation block for the operator
//   lam v + s(x3) i xi1 v [+ s'(x3) v3 e1] + grad q - mu (Lap v + grad div v)
// with no-slip bottom rows and either Dirichlet or stress rows at the top.
// Unknown ordering [v1 | v2 | v3 | q], each of length N3.  Momentum is
// collocated at interior nodes, the divergence at every node; boundary rows
// replace the endpoint momentum rows.
struct ModeBlockSpec {
  double xi1 = 0.0, xi2 = 0.0;
  double lam = 0.0;             // mass coefficient; 0 for the steady solvers
  bool dirichlet_top = false;   // else stress rows
  bool sprime_coupling = false; // include s'(x3) v3 e1 (the stepper operator)
  cplx beta = 0.0;              // surface-coupling weight folded into stress rows
  double sigma = 0.0;
  double gamma = 0.0;
};

Eigen::MatrixXcd build_mode_block(const Grid& g, const Params& params,
                                  const ModeBlockSpec& spec);

// Right-hand side in the same row layout.  bc_top is Dirichlet data or
// stress data (already including any coupling shifts).
Eigen::VectorXcd assemble_mode_rhs(const Grid& g, const ModeBlockSpec& spec,
                                   const Eigen::VectorXcd& r1,
                                   const Eigen::VectorXcd& r2,
                                   const Eigen::VectorXcd& r3,
                                   const Eigen::VectorXcd& rdiv,
                                   const std::array<cplx, 3>& bc_top);

struct ZeroModeSolution {
  Eigen::VectorXcd v1, v2, v3, q;
};

// Direct sequential solve of the (0,0) mode: v3 by vertical integration of
// the divergence, v1/v2 by Helmholtz solves, q by integrating momentum-3.
// For the Dirichlet variant the pressure is gauged to int_Omega q = 0;
// otherwise the stress row pins q at the top.
ZeroModeSolution solve_zero_mode(const Grid& g, const Params& params,
                                 const ModeBlockSpec& spec,
                                 const Eigen::VectorXcd& r1,
                                 const Eigen::VectorXcd& r2,
                                 const Eigen::VectorXcd& r3,
                                 const Eigen::VectorXcd& rdiv,
                                 const std::array<cplx, 3>& bc_top);

// gather/scatter between field spectra and per-mode vertical vectors
Eigen::VectorXcd gather_mode(const VolumeField& f, int k1, int k2);
void scatter_mode(VolumeField& f, int k1, int k2, const Eigen::VectorXcd& v);

}  // namespace shearflow::detail
