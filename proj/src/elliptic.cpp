#include "shearflow/elliptic.hpp"

#include <stdexcept>

#include "modesolver.hpp"
#include "shearflow/equilibrium.hpp"
#include "shearflow/geometry.hpp"
#include "shearflow/ops.hpp"

namespace shearflow {

SurfaceField solve_capillary(const SurfaceField& f, double sigma, double g) {
  if (g <= 0) throw std::invalid_argument("solve_capillary: g must be > 0");
  if (sigma < 0) throw std::invalid_argument("solve_capillary: sigma >= 0");
  const Grid& gr = f.grid();
  SurfaceField psi(gr);
  auto in = f.spec();
  auto o = psi.spec_mut();
  const int K1 = gr.K1(), N2 = gr.N2();
  for (int k2 = 0; k2 < N2; ++k2)
    for (int k1 = 0; k1 < K1; ++k1)
      o[(size_t)k2 * K1 + k1] =
          in[(size_t)k2 * K1 + k1] / (g + sigma * gr.xi_sq(k1, k2));
  return psi;
}

namespace {

using detail::ModeBlockSpec;

std::vector<double> shear_values(const Params& p, const Grid& g) {
  std::vector<double> s(g.N3());
  for (int l = 0; l < g.N3(); ++l)
    s[l] = shear_profile(p.gamma, g.b(), g.x3(l));
  return s;
}

struct StokesKind {
  bool dirichlet;
};

StokesSolution solve_stokes(const VectorVolumeField& f1, const VolumeField& f2,
                            const VectorSurfaceField& f3, const Params& params,
                            const Grid& grid, StokesKind kind) {
  params.validate();
  if (!f1.grid().same_as(grid) || !f2.grid().same_as(grid))
    throw std::invalid_argument("solve_stokes: grid mismatch");

  if (kind.dirichlet) {
    // divergence-theorem compatibility: int_Omega f2 = int_Sigma f3 . e3
    double lhs = integral_volume(f2);
    double rhs = integral_surface(f3[2]);
    double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
    if (std::abs(lhs - rhs) > 1e-8 * scale)
      throw std::invalid_argument(
          "solve_stokes_dirichlet: incompatible data, int f2 != int f3.e3 (" +
          std::to_string(lhs) + " vs " + std::to_string(rhs) + ")");
  }

  StokesSolution sol;
  sol.u = VectorVolumeField(grid);
  sol.p = VolumeField(grid);

  const int K1 = grid.K1(), N2 = grid.N2(), N3 = grid.N3();
  for (int k2 = 0; k2 < N2; ++k2) {
    for (int k1 = 0; k1 < K1; ++k1) {
      if (grid.nyquist1(k1) || grid.nyquist2(k2)) continue;  // projected out
      ModeBlockSpec spec;
      spec.xi1 = grid.xi1(k1);
      spec.xi2 = grid.xi2(k2);
      spec.lam = 0.0;
      spec.dirichlet_top = kind.dirichlet;
      spec.sprime_coupling = false;

      Eigen::VectorXcd r1 = detail::gather_mode(f1.x, k1, k2);
      Eigen::VectorXcd r2 = detail::gather_mode(f1.y, k1, k2);
      Eigen::VectorXcd r3 = detail::gather_mode(f1.z, k1, k2);
      Eigen::VectorXcd rdiv = detail::gather_mode(f2, k1, k2);
      std::array<cplx, 3> top = {f3[0].c(k1, k2), f3[1].c(k1, k2),
                                 f3[2].c(k1, k2)};

      if (k1 == 0 && k2 == 0) {
        auto z = detail::solve_zero_mode(grid, params, spec, r1, r2, r3, rdiv,
                                         top);
        detail::scatter_mode(sol.u.x, k1, k2, z.v1);
        detail::scatter_mode(sol.u.y, k1, k2, z.v2);
        detail::scatter_mode(sol.u.z, k1, k2, z.v3);
        detail::scatter_mode(sol.p, k1, k2, z.q);
        continue;
      }

      Eigen::MatrixXcd M = detail::build_mode_block(grid, params, spec);
      Eigen::VectorXcd b =
          detail::assemble_mode_rhs(grid, spec, r1, r2, r3, rdiv, top);
      Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
      if (!lu.isInvertible())
        throw std::runtime_error("solve_stokes: singular mode system at (" +
                                 std::to_string(k1) + "," +
                                 std::to_string(k2) + ")");
      Eigen::VectorXcd x = lu.solve(b);
      detail::scatter_mode(sol.u.x, k1, k2, x.segment(0, N3));
      detail::scatter_mode(sol.u.y, k1, k2, x.segment(N3, N3));
      detail::scatter_mode(sol.u.z, k1, k2, x.segment(2 * N3, N3));
      detail::scatter_mode(sol.p, k1, k2, x.segment(3 * N3, N3));
    }
  }
  sol.u.x.enforce_hermitian();
  sol.u.y.enforce_hermitian();
  sol.u.z.enforce_hermitian();
  sol.p.enforce_hermitian();

  sol.grad_p = VectorVolumeField(grid);
  sol.grad_p.x = diff(sol.p, 1);
  sol.grad_p.y = diff(sol.p, 2);
  sol.grad_p.z = diff(sol.p, 3);

  // residuals: substitute the solution back into each equation
  const auto sprof = shear_values(params, grid);
  {
    VectorVolumeField r = div_tensor(stress(sol.p, sol.u));
    // div S uses mu: S = pI - mu D u
    if (params.mu != 1.0) {
      VectorVolumeField visc = div_tensor(sym_grad(sol.u));
      for (int i = 0; i < 3; ++i) {
        axpy(1.0 - params.mu, visc.comp(i), r.comp(i));
      }
    }
    for (int i = 0; i < 3; ++i) {
      VolumeField adv = scale_by_profile(diff(sol.u.comp(i), 1), sprof);
      axpy(1.0, adv, r.comp(i));
      axpy(-1.0, f1.comp(i), r.comp(i));
      sol.r_momentum = std::max(sol.r_momentum, sup_norm(r.comp(i)));
    }
  }
  sol.r_div = sup_norm(divergence(sol.u) - f2);
  if (kind.dirichlet) {
    for (int i = 0; i < 3; ++i)
      sol.r_bc_top = std::max(
          sol.r_bc_top, sup_norm(trace_surface(sol.u.comp(i)) - f3[i]));
  } else {
    SymTensorVolumeField S = stress(sol.p, sol.u);
    if (params.mu != 1.0) {
      SymTensorVolumeField Du = sym_grad(sol.u);
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
          axpy(1.0 - params.mu, Du.comp(i, j), S.comp(i, j));
    }
    for (int i = 0; i < 3; ++i)
      sol.r_bc_top = std::max(
          sol.r_bc_top, sup_norm(trace_surface(S.comp(i, 2)) - f3[i]));
  }
  for (int i = 0; i < 3; ++i)
    sol.r_bc_bottom =
        std::max(sol.r_bc_bottom, sup_norm(trace_bottom(sol.u.comp(i))));

  return sol;
}

}  // namespace

StokesSolution solve_stokes_dirichlet(const VectorVolumeField& f1,
                                      const VolumeField& f2,
                                      const VectorSurfaceField& f3,
                                      const Params& params, const Grid& grid) {
  return solve_stokes(f1, f2, f3, params, grid, StokesKind{true});
}

StokesSolution solve_stokes_stress(const VectorVolumeField& f1,
                                   const VolumeField& f2,
                                   const VectorSurfaceField& f3,
                                   const Params& params, const Grid& grid) {
  return solve_stokes(f1, f2, f3, params, grid, StokesKind{false});
}

}  // namespace shearflow
