#include "shearflow/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "shearflow/ops.hpp"

namespace shearflow {

double shear_profile(double gamma, double b, double x3) {
  return 0.5 * gamma * (b * b - x3 * x3);
}

double shear_profile_deriv(double gamma, double /*b*/, double x3) {
  return -gamma * x3;
}

Background background(const Params& params, const Grid& grid) {
  return Background{params.gamma, grid.b(), params.P_ext};
}

FlowState equilibrium_state(const Params& params, const Grid& grid,
                            int history_depth) {
  params.validate();
  FlowState s(grid, history_depth);
  s.history.push(s.snapshot());
  return s;
}

double EquilibriumResidual::max() const {
  return std::max({momentum, divergence, stress, kinematic});
}

namespace {

void add_constant(VolumeField& f, double c) {
  auto s = f.spec_mut();
  const Grid& g = f.grid();
  const size_t plane = (size_t)g.K1() * g.N2();
  for (int l = 0; l < g.N3(); ++l) s[(size_t)l * plane] += c;
}

}  // namespace

EquilibriumResidual equilibrium_residual(const Params& params,
                                         const Grid& grid) {
  params.validate();
  const Background bg = background(params, grid);

  VolumeField U1(grid);
  {
    auto ph = U1.phys_mut();
    const size_t plane = (size_t)grid.N1() * grid.N2();
    for (int l = 0; l < grid.N3(); ++l)
      std::fill(ph.begin() + (size_t)l * plane,
                ph.begin() + (size_t)(l + 1) * plane, bg.U1(grid.x3(l)));
  }

  EquilibriumResidual r{};

  // momentum: U.grad U + grad P - mu Lap U - gamma e1 + g e3.  The pressure
  // P = P_ext - x3 gives grad P = -e3, exact at the paper's g = 1.
  {
    VolumeField conv = multiply(U1, diff(U1, 1));  // (U.grad U)_1
    VolumeField lap = diff(U1, 1, 2) + diff(U1, 2, 2) + diff(U1, 3, 2);
    VolumeField m1 = conv - params.mu * lap;
    add_constant(m1, -params.gamma);
    r.momentum = std::max(sup_norm(m1), std::abs(params.g - 1.0));
  }

  r.divergence = sup_norm(diff(U1, 1));

  // stress balance at x3 = 0: (P I - mu D U) e3 = (P_ext - sigma H(0)) e3;
  // residual rows: (-mu d3 U1|_top, 0, P(0) - P_ext)
  {
    SurfaceField d3U1 = trace_surface(diff(U1, 3));
    r.stress = std::max(params.mu * sup_norm(d3U1),
                        std::abs(bg.P(0.0) - params.P_ext));
  }

  // kinematic at eta = 0: U_3 - U_1 d1(0) - U_2 d2(0) = 0 identically
  r.kinematic = 0.0;

  return r;
}

}  // namespace shearflow
