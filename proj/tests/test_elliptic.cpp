#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shearflow/elliptic.hpp"
#include "shearflow/equilibrium.hpp"
#include "shearflow/geometry.hpp"
#include "shearflow/ops.hpp"
#include "shearflow/rng.hpp"

using namespace shearflow;

namespace {

constexpr double kPi = std::numbers::pi;

SurfaceField band_limited(const Grid& g, int k_max, double amp,
                          std::uint64_t seed) {
  CounterRng rng(seed);
  SurfaceField f(g);
  auto s = f.spec_mut();
  std::uint64_t c = 0;
  for (int k2 = 0; k2 < g.N2(); ++k2) {
    int m2 = (k2 <= g.N2() / 2) ? k2 : k2 - g.N2();
    for (int k1 = 0; k1 < g.K1(); ++k1) {
      if (k1 > k_max || std::abs(m2) > k_max) continue;
      if (g.nyquist1(k1) || g.nyquist2(k2)) continue;
      s[(size_t)k2 * g.K1() + k1] =
          amp * cplx(rng.uniform(c), rng.uniform(c + 1));
      c += 2;
    }
  }
  f.enforce_hermitian();
  return f;
}

// fill from a horizontal harmonic times a vertical profile
void fill_mode(VolumeField& f, int kx, int ky, bool use_sin,
               const std::vector<double>& prof) {
  const Grid& g = f.grid();
  auto ph = f.phys_mut();
  for (int l = 0; l < g.N3(); ++l)
    for (int i2 = 0; i2 < g.N2(); ++i2)
      for (int i1 = 0; i1 < g.N1(); ++i1) {
        double x = g.L1() * i1 / g.N1() * 2 * kPi / g.L1();
        double y = g.L2() * i2 / g.N2() * 2 * kPi / g.L2();
        double h = use_sin ? std::sin(kx * x + ky * y) : std::cos(kx * x + ky * y);
        ph[((size_t)l * g.N2() + i2) * g.N1() + i1] = prof[l] * h;
      }
}

std::vector<double> bottom_poly(const Grid& g, double c0, double c1, double c2) {
  std::vector<double> v(g.N3());
  for (int l = 0; l < g.N3(); ++l) {
    double x = g.x3(l), bp = x + g.b();
    v[l] = bp * bp * (c0 + c1 * x + c2 * x * x);
  }
  return v;
}

}  // namespace

TEST_CASE("capillary: zero and single mode") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 16, 16, 9);
  SurfaceField zero(g);
  CHECK(sup_norm(solve_capillary(zero, 1.0, 1.0)) == 0.0);

  SurfaceField f(g);
  f.spec_mut()[(size_t)2 * g.K1() + 1] = cplx(0.3, -0.2);
  f.enforce_hermitian();
  SurfaceField psi = solve_capillary(f, 1.0, 1.0);
  double xisq = g.xi_sq(1, 2);
  CHECK(std::abs(psi.c(1, 2) - f.c(1, 2) / (1.0 + xisq)) <= 1e-15);

  CHECK_THROWS_AS(solve_capillary(f, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_capillary(f, -1.0, 1.0), std::invalid_argument);

  // sigma = 0 reduces to psi = f / g
  SurfaceField p0 = solve_capillary(f, 0.0, 2.0);
  CHECK(sup_norm(p0 - 0.5 * f) <= 1e-15);
}

TEST_CASE("capillary: residual and bound for random data") {
  Grid g = make_grid(2 * kPi, kPi, 1.0, 16, 16, 9);
  const double sigma = 0.3, grav = 1.0;
  SurfaceField f = band_limited(g, 5, 1.0, 2024);
  SurfaceField psi = solve_capillary(f, sigma, grav);
  SurfaceField lap = diff(psi, 1, 2) + diff(psi, 2, 2);
  CHECK(l2_surface((-sigma) * lap + grav * psi - f) <= 1e-12);
  CHECK(sobolev_norm_surface(psi, 2.0) <=
        sobolev_norm_surface(f, 2.0) / grav * (1 + 1e-12));
}

TEST_CASE("capillary: continuity in sigma") {
  Grid g = make_grid(2 * kPi, kPi, 1.0, 16, 16, 9);
  SurfaceField f = band_limited(g, 4, 1.0, 77);
  SurfaceField psi0 = solve_capillary(f, 0.0, 1.0);
  double prev = -1.0;
  for (double sigma : {1.0, 0.1, 0.01}) {
    double gap = l2_surface(solve_capillary(f, sigma, 1.0) - psi0);
    if (prev >= 0) CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("stokes: zero data gives the zero solution") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 8, 8, 17);
  Params p;
  p.gamma = 0.3;
  VectorVolumeField f1(g);
  VolumeField f2(g);
  VectorSurfaceField f3{SurfaceField(g), SurfaceField(g), SurfaceField(g)};
  auto sol_d = solve_stokes_dirichlet(f1, f2, f3, p, g);
  CHECK(sup_norm(sol_d.u.x) <= 1e-13);
  CHECK(sup_norm(sol_d.u.z) <= 1e-13);
  CHECK(sup_norm(sol_d.grad_p.x) <= 1e-13);
  auto sol_s = solve_stokes_stress(f1, f2, f3, p, g);
  CHECK(sup_norm(sol_s.u.x) <= 1e-13);
  CHECK(sup_norm(sol_s.p) <= 1e-13);
}

TEST_CASE("stokes dirichlet: incompatible data is rejected") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 8, 8, 9);
  Params p;
  VectorVolumeField f1(g);
  VolumeField f2(g);
  {
    // int f2 = volume, while f3 = 0
    auto ph = f2.phys_mut();
    std::fill(ph.begin(), ph.end(), 1.0);
  }
  VectorSurfaceField f3{SurfaceField(g), SurfaceField(g), SurfaceField(g)};
  CHECK_THROWS_AS(solve_stokes_dirichlet(f1, f2, f3, p, g),
                  std::invalid_argument);
}

TEST_CASE("stokes: manufactured solution recovery") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 16, 8, 33);
  for (double gamma : {0.0, 0.5}) {
    Params p;
    p.gamma = gamma;
    VectorVolumeField ustar(g);
    VolumeField pstar(g);
    fill_mode(ustar.x, 1, 0, true, bottom_poly(g, 1.0, 0.5, 0.0));
    fill_mode(ustar.y, 1, 1, false, bottom_poly(g, 0.4, -0.3, 0.2));
    fill_mode(ustar.z, 2, 0, true, bottom_poly(g, 0.7, 0.1, -0.2));
    {
      std::vector<double> prof(g.N3());
      for (int l = 0; l < g.N3(); ++l)
        prof[l] = 0.3 + g.x3(l) - 0.5 * g.x3(l) * g.x3(l);
      fill_mode(pstar, 1, 0, false, prof);
    }
    std::vector<double> sprof(g.N3());
    for (int l = 0; l < g.N3(); ++l)
      sprof[l] = shear_profile(gamma, g.b(), g.x3(l));

    VectorVolumeField f1(g);
    VectorVolumeField divS = div_tensor(stress(pstar, ustar));
    for (int i = 0; i < 3; ++i) {
      f1.comp(i) = scale_by_profile(diff(ustar.comp(i), 1), sprof);
      axpy(1.0, divS.comp(i), f1.comp(i));
    }
    VolumeField f2 = divergence(ustar);

    SUBCASE("dirichlet") {
      VectorSurfaceField f3;
      for (int i = 0; i < 3; ++i) f3[i] = trace_surface(ustar.comp(i));
      auto sol = solve_stokes_dirichlet(f1, f2, f3, p, g);
      CHECK(sol.r_momentum <= 1e-8);
      CHECK(sol.r_div <= 1e-8);
      CHECK(sol.r_bc_top <= 1e-8);
      CHECK(sol.r_bc_bottom <= 1e-10);
      for (int i = 0; i < 3; ++i)
        CHECK(sup_norm(sol.u.comp(i) - ustar.comp(i)) <= 1e-8);
      CHECK(sup_norm(sol.grad_p.x - diff(pstar, 1)) <= 1e-8);
      CHECK(sup_norm(sol.grad_p.z - diff(pstar, 3)) <= 1e-8);
      // gauge: int p = 0
      CHECK(std::abs(integral_volume(sol.p)) <= 1e-10);
    }
    SUBCASE("stress") {
      SymTensorVolumeField S = stress(pstar, ustar);
      VectorSurfaceField f3;
      for (int i = 0; i < 3; ++i) f3[i] = trace_surface(S.comp(i, 2));
      auto sol = solve_stokes_stress(f1, f2, f3, p, g);
      CHECK(sol.r_momentum <= 1e-8);
      CHECK(sol.r_div <= 1e-8);
      CHECK(sol.r_bc_top <= 1e-8);
      CHECK(sol.r_bc_bottom <= 1e-10);
      for (int i = 0; i < 3; ++i)
        CHECK(sup_norm(sol.u.comp(i) - ustar.comp(i)) <= 1e-8);
      CHECK(sup_norm(sol.p - pstar) <= 1e-8);
    }
  }
}

TEST_CASE("stokes stress: constant normal traction pins the pressure") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 8, 8, 17);
  Params p;  // gamma = 0
  VectorVolumeField f1(g);
  VolumeField f2(g);
  VectorSurfaceField f3{SurfaceField(g), SurfaceField(g), SurfaceField(g)};
  f3[2].spec_mut()[0] = 1.0;  // f3 = e3
  auto sol = solve_stokes_stress(f1, f2, f3, p, g);
  for (int i = 0; i < 3; ++i) CHECK(sup_norm(sol.u.comp(i)) <= 1e-12);
  // pressure only in the zero horizontal mode
  auto sp = sol.p.spec();
  double off = 0.0;
  const size_t plane = (size_t)g.K1() * g.N2();
  for (int l = 0; l < g.N3(); ++l)
    for (size_t i = 1; i < plane; ++i)
      off = std::max(off, std::abs(sp[(size_t)l * plane + i]));
  CHECK(off <= 1e-12);
  CHECK(sol.r_momentum <= 1e-10);
  CHECK(sol.r_bc_top <= 1e-10);
}

TEST_CASE("stokes solvers are linear") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 8, 8, 17);
  Params p;
  p.gamma = 0.4;
  auto make_data = [&](std::uint64_t seed) {
    VectorVolumeField f1(g);
    fill_mode(f1.x, 1, 0, seed % 2, bottom_poly(g, 0.5, 0.1, 0.0));
    fill_mode(f1.z, 1, 1, true, bottom_poly(g, 0.2, 0.0, 0.1));
    VolumeField f2(g);
    VectorSurfaceField f3{band_limited(g, 2, 0.3, seed),
                          band_limited(g, 2, 0.2, seed + 1),
                          band_limited(g, 2, 0.25, seed + 2)};
    return std::tuple{f1, f2, f3};
  };
  auto [a1, a2, a3] = make_data(10);
  auto [b1, b2, b3] = make_data(20);
  VectorVolumeField s1(g);
  VolumeField s2 = a2 + b2;
  VectorSurfaceField s3;
  for (int i = 0; i < 3; ++i) {
    s1.comp(i) = a1.comp(i) + b1.comp(i);
    s3[i] = a3[i] + b3[i];
  }
  auto sol_a = solve_stokes_stress(a1, a2, a3, p, g);
  auto sol_b = solve_stokes_stress(b1, b2, b3, p, g);
  auto sol_s = solve_stokes_stress(s1, s2, s3, p, g);
  for (int i = 0; i < 3; ++i)
    CHECK(sup_norm(sol_s.u.comp(i) - sol_a.u.comp(i) - sol_b.u.comp(i)) <=
          1e-12);
  CHECK(sup_norm(sol_s.p - sol_a.p - sol_b.p) <= 1e-12);
}

TEST_CASE("cross-solver consistency: stress data from a dirichlet solve") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 16, 8, 33);
  Params p;
  p.gamma = 0.5;
  // a compatible Dirichlet problem from a manufactured field
  VectorVolumeField ustar(g);
  VolumeField pstar(g);
  fill_mode(ustar.x, 1, 0, true, bottom_poly(g, 0.8, 0.2, 0.0));
  fill_mode(ustar.y, 0, 1, false, bottom_poly(g, 0.3, 0.1, 0.0));
  fill_mode(ustar.z, 1, 1, true, bottom_poly(g, 0.5, -0.1, 0.0));
  fill_mode(pstar, 1, 0, false, std::vector<double>(g.N3(), 0.4));
  std::vector<double> sprof(g.N3());
  for (int l = 0; l < g.N3(); ++l)
    sprof[l] = shear_profile(p.gamma, g.b(), g.x3(l));
  VectorVolumeField f1(g);
  VectorVolumeField divS = div_tensor(stress(pstar, ustar));
  for (int i = 0; i < 3; ++i) {
    f1.comp(i) = scale_by_profile(diff(ustar.comp(i), 1), sprof);
    axpy(1.0, divS.comp(i), f1.comp(i));
  }
  VolumeField f2 = divergence(ustar);
  VectorSurfaceField f3d;
  for (int i = 0; i < 3; ++i) f3d[i] = trace_surface(ustar.comp(i));
  auto dir = solve_stokes_dirichlet(f1, f2, f3d, p, g);

  // feed the computed stress back through the stress solver
  SymTensorVolumeField S = stress(dir.p, dir.u);
  VectorSurfaceField f3s;
  for (int i = 0; i < 3; ++i) f3s[i] = trace_surface(S.comp(i, 2));
  auto str = solve_stokes_stress(f1, f2, f3s, p, g);
  for (int i = 0; i < 3; ++i)
    CHECK(sup_norm(str.u.comp(i) - dir.u.comp(i)) <= 1e-8);
}
