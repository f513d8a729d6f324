#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shearflow/geometry.hpp"
#include "shearflow/ops.hpp"
#include "shearflow/rng.hpp"

using namespace shearflow;

namespace {

constexpr double kPi = std::numbers::pi;

SurfaceField cos_mode(const Grid& g, int k1, int k2, double amp) {
  SurfaceField f(g);
  int k2i = (k2 >= 0) ? k2 : g.N2() + k2;
  f.spec_mut()[(size_t)k2i * g.K1() + k1] = 0.5 * amp;
  f.enforce_hermitian();
  return f;
}

SurfaceField band_limited(const Grid& g, int k_max, double amp,
                          std::uint64_t seed) {
  CounterRng rng(seed);
  SurfaceField f(g);
  auto s = f.spec_mut();
  std::uint64_t c = 0;
  for (int k2 = 0; k2 < g.N2(); ++k2) {
    int m2 = (k2 <= g.N2() / 2) ? k2 : k2 - g.N2();
    for (int k1 = 0; k1 < g.K1(); ++k1) {
      if (k1 == 0 && k2 == 0) continue;
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

}  // namespace

TEST_CASE("poisson extension basics") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 8, 8, 9);

  SurfaceField zero(g);
  CHECK(sup_norm(poisson_extend(zero)) == 0.0);

  // constant extends as a constant
  SurfaceField c(g);
  c.spec_mut()[0] = 2.5;
  VolumeField ce = poisson_extend(c);
  for (int l = 0; l < g.N3(); ++l)
    CHECK(ce.p(3, 2, l) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("poisson extension closed-form mode and harmonic residual") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 8, 8, 33);
  SurfaceField eta = cos_mode(g, 1, 0, 1.0);  // cos(x1), |xi| = 1
  VolumeField ext = poisson_extend(eta);
  for (int l = 0; l < g.N3(); ++l)
    for (int i1 = 0; i1 < g.N1(); ++i1) {
      double x = g.L1() * i1 / g.N1();
      double expect = std::cos(x) * std::exp(g.x3(l));
      CHECK(ext.p(i1, 0, l) == doctest::Approx(expect).epsilon(1e-12));
    }
  VolumeField lap = diff(ext, 1, 2) + diff(ext, 2, 2) + diff(ext, 3, 2);
  CHECK(sup_norm(lap) <= 1e-8);
}

TEST_CASE("poisson extension is linear") {
  Grid g = make_grid(2 * kPi, kPi, 1.0, 16, 8, 9);
  SurfaceField f = band_limited(g, 3, 0.3, 5);
  SurfaceField h = band_limited(g, 3, 0.2, 6);
  VolumeField lhs = poisson_extend(2.0 * f - 3.0 * h);
  VolumeField rhs = 2.0 * poisson_extend(f) - 3.0 * poisson_extend(h);
  CHECK(sup_norm(lhs - rhs) <= 1e-14);
}

TEST_CASE("flat geometry cache") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 8, 8, 9);
  Params p;
  SurfaceField eta(g);
  GeometryCache c = build_geometry(eta, nullptr, p);
  CHECK(sup_norm(c.dshift_dx1) == 0.0);
  CHECK(sup_norm(c.dshift_dx2) == 0.0);
  VolumeField jm1 = c.jacobian;
  {
    auto s = jm1.spec_mut();
    const size_t plane = (size_t)g.K1() * g.N2();
    for (int l = 0; l < g.N3(); ++l) s[(size_t)l * plane] -= 1.0;
  }
  CHECK(sup_norm(jm1) == 0.0);
  CHECK(sup_norm(c.normal[0]) == 0.0);
  CHECK(c.normal[2].c(0, 0).real() == doctest::Approx(1.0));
  // metric reduces to the identity
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(sup_norm(c.metric_m_id(i, j)) <= 1e-15);
}

TEST_CASE("jacobian closed form for a single mode") {
  double b = 1.0, eps = 0.01;
  Grid g = make_grid(2 * kPi, 2 * kPi, b, 16, 8, 17);
  SurfaceField eta = cos_mode(g, 1, 0, eps);
  Params p;
  GeometryCache c = build_geometry(eta, nullptr, p);
  // eta_ext = eps cos(x1) e^{x3}; at x' = 0, x3 = 0 (top node):
  // J = 1 + eta/b + d3(eta_ext) ramp = 1 + eps + eps
  double expect = 1.0 + eps / b + eps * (1.0 + 0.0 / b);
  CHECK(c.jacobian.p(0, 0, g.N3() - 1) ==
        doctest::Approx(expect).epsilon(1e-12));
  // J K = 1 pointwise
  auto jp = c.jacobian.phys();
  auto kp = c.inv_jacobian.phys();
  for (size_t i = 0; i < jp.size(); ++i)
    CHECK(jp[i] * kp[i] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("domain collapse raises") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 8, 8, 9);
  Params p;
  SurfaceField eta = cos_mode(g, 1, 0, 0.999);  // surface dips almost to -b
  CHECK_THROWS_AS(build_geometry(eta, nullptr, p), DomainCollapse);
}

TEST_CASE("time derivative of the jacobian matches the formula") {
  // along eta(t) = eta0 + t etadot, J is affine in t, so a finite
  // difference across t is exact
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 16, 8, 9);
  Params p;
  SurfaceField eta0 = band_limited(g, 2, 0.02, 17);
  SurfaceField etadot = band_limited(g, 2, 0.05, 18);
  GeometryCache c0 = build_geometry(eta0, &etadot, p);

  const double h = 0.25;
  SurfaceField eta1 = eta0 + h * etadot;
  GeometryCache c1 = build_geometry(eta1, &etadot, p);
  VolumeField fd = (1.0 / h) * (c1.jacobian - c0.jacobian);
  CHECK(sup_norm(fd - c0.djacobian_dt) <= 1e-11);
}

TEST_CASE("geometric identity d_k(J A_ik) = 0") {
  Grid g = make_grid(2 * kPi, kPi, 1.0, 16, 16, 33);
  Params p;
  SurfaceField eta = band_limited(g, 3, 0.002, 33);
  REQUIRE(sup_norm(eta) <= 0.1 * g.b());
  GeometryCache c = build_geometry(eta, nullptr, p);
  CHECK(sup_norm(diff(c.jacobian, 1) - diff(c.dshift_dx1, 3)) <= 1e-8);
  CHECK(sup_norm(diff(c.jacobian, 2) - diff(c.dshift_dx2, 3)) <= 1e-8);
  // J A e3 = N on Sigma
  CHECK(sup_norm(-1.0 * trace_surface(c.dshift_dx1) - c.normal[0]) <= 1e-10);
  CHECK(sup_norm(-1.0 * trace_surface(c.dshift_dx2) - c.normal[1]) <= 1e-10);
}

TEST_CASE("metric operators reduce to flat operators at eta = 0") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 8, 8, 9);
  Params p;
  GeometryCache c = build_geometry(SurfaceField(g), nullptr, p);

  VolumeField f(g);
  {
    auto ph = f.phys_mut();
    for (int l = 0; l < g.N3(); ++l)
      for (int i2 = 0; i2 < g.N2(); ++i2)
        for (int i1 = 0; i1 < g.N1(); ++i1) {
          double x = g.L1() * i1 / g.N1(), y = g.L2() * i2 / g.N2();
          ph[((size_t)l * g.N2() + i2) * g.N1() + i1] =
              std::sin(x) * std::cos(y) * (1 + g.x3(l));
        }
  }
  VectorVolumeField gf = grad_a(f, c);
  CHECK(sup_norm(gf.x - diff(f, 1)) <= 1e-11);
  CHECK(sup_norm(gf.y - diff(f, 2)) <= 1e-11);
  CHECK(sup_norm(gf.z - diff(f, 3)) <= 1e-11);

  // a flat divergence-free field stays divergence-free under div_a
  VectorVolumeField u(g);
  {
    // u = (cos(x1) a(x3), 0, sin(x1) c(x3)) with c' = a
    auto px = u.x.phys_mut();
    auto pz = u.z.phys_mut();
    for (int l = 0; l < g.N3(); ++l) {
      double z = g.x3(l), bp = z + g.b();
      double cprof = bp * bp * z * z;
      double aprof = 2 * bp * z * z + 2 * bp * bp * z;
      for (int i2 = 0; i2 < g.N2(); ++i2)
        for (int i1 = 0; i1 < g.N1(); ++i1) {
          double x = g.L1() * i1 / g.N1();
          pz[((size_t)l * g.N2() + i2) * g.N1() + i1] = std::sin(x) * cprof;
          px[((size_t)l * g.N2() + i2) * g.N1() + i1] = std::cos(x) * aprof;
        }
    }
  }
  CHECK(sup_norm(divergence(u)) <= 1e-11);
  CHECK(sup_norm(div_a(u, c)) <= 1e-11);
}

TEST_CASE("div_a matches a fine-grid evaluation for small eta") {
  // resolution-independence oracle: the same analytic inputs evaluated on a
  // twice-finer grid must give the same div_a at shared surface nodes
  auto build = [&](int N1, int N2, int N3) {
    Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, N1, N2, N3);
    Params p;
    SurfaceField eta = cos_mode(g, 1, 0, 0.02);
    GeometryCache c = build_geometry(eta, nullptr, p);
    VectorVolumeField X(g);
    auto fill = [&](VolumeField& f, auto&& fn) {
      auto ph = f.phys_mut();
      for (int l = 0; l < g.N3(); ++l)
        for (int i2 = 0; i2 < g.N2(); ++i2)
          for (int i1 = 0; i1 < g.N1(); ++i1) {
            double x = g.L1() * i1 / g.N1(), y = g.L2() * i2 / g.N2();
            ph[((size_t)l * g.N2() + i2) * g.N1() + i1] = fn(x, y, g.x3(l));
          }
    };
    fill(X.x, [](double x, double y, double z) {
      return std::sin(x) * std::cos(y) * (1 + z);
    });
    fill(X.y, [](double x, double y, double z) {
      return std::cos(x + y) * (1 + z * z);
    });
    fill(X.z, [](double x, double, double z) {
      return std::sin(2 * x) * z * (1 + z);
    });
    return div_a(X, c);
  };
  VolumeField coarse = build(16, 16, 17);
  VolumeField fine = build(32, 32, 33);
  // both grids share the plane x3 = 0 and the even-index horizontal nodes
  const Grid& gc = coarse.grid();
  const Grid& gf = fine.grid();
  double err = 0.0;
  for (int i2 = 0; i2 < gc.N2(); ++i2)
    for (int i1 = 0; i1 < gc.N1(); ++i1)
      err = std::max(err, std::abs(coarse.p(i1, i2, gc.N3() - 1) -
                                   fine.p(2 * i1, 2 * i2, gf.N3() - 1)));
  CHECK(err <= 1e-9);
}

TEST_CASE("mean curvature") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 16, 16, 9);
  SurfaceField zero(g);
  CHECK(sup_norm(mean_curvature(zero)) == 0.0);

  SurfaceField c(g);
  c.spec_mut()[0] = 0.7;
  CHECK(sup_norm(mean_curvature(c)) <= 1e-14);

  // small slope: H(eta) = Lap eta + O(eps^3)
  SurfaceField eta = cos_mode(g, 1, 0, 1e-4);
  SurfaceField lap = diff(eta, 1, 2) + diff(eta, 2, 2);
  CHECK(sup_norm(mean_curvature(eta) - lap) <= 1e-9);

  // steeper surface: resolution independence of the dealiased evaluation
  Grid g2 = make_grid(2 * kPi, 2 * kPi, 1.0, 32, 32, 9);
  SurfaceField eta_c = cos_mode(g, 1, 0, 0.2);
  SurfaceField eta_f = cos_mode(g2, 1, 0, 0.2);
  SurfaceField hc = mean_curvature(eta_c);
  SurfaceField hf = mean_curvature(eta_f);
  double err = 0.0;
  for (int k1 = 0; k1 <= 4; ++k1)
    err = std::max(err, std::abs(hc.c(k1, 0) - hf.c(k1, 0)));
  CHECK(err <= 1e-9);
}

TEST_CASE("stress_a reduces to flat stress at eta = 0") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 8, 8, 9);
  Params prm;
  GeometryCache c = build_geometry(SurfaceField(g), nullptr, prm);
  VectorVolumeField u(g);
  VolumeField p(g);
  auto fill = [&](VolumeField& f, double a, double bfreq) {
    auto ph = f.phys_mut();
    for (int l = 0; l < g.N3(); ++l)
      for (int i2 = 0; i2 < g.N2(); ++i2)
        for (int i1 = 0; i1 < g.N1(); ++i1) {
          double x = g.L1() * i1 / g.N1(), y = g.L2() * i2 / g.N2();
          ph[((size_t)l * g.N2() + i2) * g.N1() + i1] =
              a * std::sin(x + bfreq * y) * (1 + g.x3(l) * g.x3(l));
        }
  };
  fill(u.x, 0.8, 1.0);
  fill(u.y, 0.5, 2.0);
  fill(u.z, 0.3, 0.0);
  fill(p, 0.6, 1.0);
  SymTensorVolumeField Sa = stress_a(p, u, c);
  SymTensorVolumeField Sf = stress(p, u);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      CHECK(sup_norm(Sa.comp(i, j) - Sf.comp(i, j)) <= 1e-10);
}
