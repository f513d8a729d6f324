#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shearflow/diagnostics.hpp"
#include "shearflow/forcing.hpp"
#include "shearflow/ops.hpp"
#include "shearflow/rng.hpp"
#include "shearflow/stepper.hpp"

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

VolumeField smooth_volume(const Grid& g, int kx, int ky, double amp) {
  VolumeField f(g);
  auto ph = f.phys_mut();
  for (int l = 0; l < g.N3(); ++l) {
    double z = g.x3(l), bp = z + g.b();
    for (int i2 = 0; i2 < g.N2(); ++i2)
      for (int i1 = 0; i1 < g.N1(); ++i1) {
        double x = 2 * kPi * i1 / g.N1();
        double y = 2 * kPi * i2 / g.N2();
        ph[((size_t)l * g.N2() + i2) * g.N1() + i1] =
            amp * bp * bp * (1 + 0.1 * z) * std::sin(kx * x + ky * y);
      }
  }
  return f;
}

Snapshot make_snap(const Grid& g, double t, double scale_u, double scale_eta,
                   std::uint64_t mode_seed) {
  Snapshot s;
  s.t = t;
  s.u = VectorVolumeField(g);
  s.u.x = smooth_volume(g, 1, 0, scale_u);
  s.u.y = smooth_volume(g, 0, 1, 0.7 * scale_u);
  s.u.z = smooth_volume(g, 1, 1, 0.5 * scale_u);
  s.p = smooth_volume(g, 1, 0, 0.4 * scale_u);
  s.eta = cos_mode(g, 1 + (int)(mode_seed % 2), 0, scale_eta);
  s.deta_dt = SurfaceField(g);
  return s;
}

History constant_history(const Grid& g, int n, double dt) {
  History h(n + 2);
  Snapshot base = make_snap(g, 0.0, 1e-2, 1e-2, 0);
  for (int m = 0; m <= n; ++m) {
    Snapshot s = base;
    s.t = m * dt;
    h.push(std::move(s));
  }
  return h;
}

}  // namespace

TEST_CASE("temporal derivatives: constants, linear, and sine oracles") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 8, 8, 9);
  SUBCASE("constant history") {
    History h = constant_history(g, 3, 1e-2);
    TimeDerivs td = temporal_derivatives(h, 3);
    for (int j = 1; j <= 3; ++j) {
      CHECK(sup_norm(td.u[j].x) <= 1e-9);
      CHECK(sup_norm(td.eta[j]) <= 1e-9);
    }
  }
  SUBCASE("linear in t is differentiated exactly") {
    VectorVolumeField phi(g);
    phi.x = smooth_volume(g, 1, 0, 1.0);
    History h(5);
    for (int m = 0; m < 3; ++m) {
      Snapshot s;
      s.t = 0.1 * m;
      s.u = VectorVolumeField(g);
      s.u.x = s.t * phi.x;
      s.u.y = VolumeField(g);
      s.u.z = VolumeField(g);
      s.p = VolumeField(g);
      s.eta = SurfaceField(g);
      s.deta_dt = SurfaceField(g);
      h.push(std::move(s));
    }
    TimeDerivs td = temporal_derivatives(h, 2);
    CHECK(sup_norm(td.u[1].x - phi.x) <= 1e-11);
    CHECK(sup_norm(td.u[2].x) <= 1e-9);
  }
  SUBCASE("sine-in-time second derivative to O(dt) accuracy") {
    VolumeField phi = smooth_volume(g, 1, 0, 1.0);
    const double dt = 1e-3;
    History h(5);
    for (int m = 0; m < 4; ++m) {
      Snapshot s;
      s.t = m * dt;
      s.u = VectorVolumeField(g);
      s.u.x = std::sin(s.t) * phi;
      s.u.y = VolumeField(g);
      s.u.z = VolumeField(g);
      s.p = VolumeField(g);
      s.eta = SurfaceField(g);
      s.deta_dt = SurfaceField(g);
      h.push(std::move(s));
    }
    TimeDerivs td = temporal_derivatives(h, 3);
    double tN = 3 * dt;
    VolumeField expect = -std::sin(tN) * phi;
    CHECK(sup_norm(td.u[2].x - expect) <=
          1e-2 * std::max(1e-8, sup_norm(expect)) + 1e-8);
  }
  SUBCASE("insufficient history throws") {
    History h = constant_history(g, 1, 1e-2);
    CHECK_THROWS_AS(temporal_derivatives(h, 3), std::invalid_argument);
  }
}

TEST_CASE("energy and dissipation: zero history") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 8, 8, 9);
  History h(5);
  for (int m = 0; m < 4; ++m) {
    Snapshot s;
    s.t = m * 0.01;
    s.u = VectorVolumeField(g);
    s.p = VolumeField(g);
    s.eta = SurfaceField(g);
    s.deta_dt = SurfaceField(g);
    h.push(std::move(s));
  }
  auto e = energy(h, 2, 1.0);
  auto d = dissipation(h, 2, 1.0, 0.5);
  CHECK(e.basic == 0.0);
  CHECK(e.full == 0.0);
  CHECK(d.basic == 0.0);
  CHECK(d.full == 0.0);
  CHECK_THROWS_AS(energy(h, 1, 1.0), std::invalid_argument);
}

TEST_CASE("energy of a static single-mode surface against a Parseval sum") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 16, 16, 9);
  const double eps = 1e-3, sigma = 0.7;
  History h(5);
  for (int m = 0; m < 3; ++m) {
    Snapshot s;
    s.t = 0.01 * m;
    s.u = VectorVolumeField(g);
    s.p = VolumeField(g);
    s.eta = cos_mode(g, 1, 0, eps);
    s.deta_dt = SurfaceField(g);
    h.push(std::move(s));
  }
  auto e = energy(h, 2, sigma);
  // basic tier: sum over a1 <= 4 of ||d1^a1 eta||^2 + sigma ||grad d^a eta||^2
  // with |xi| = 1: each term is eps^2 L1 L2 / 2
  double mode_l2sq = eps * eps * g.area() / 2.0;
  double expect_basic = 0.0;
  for (int a1 = 0; a1 <= 4; ++a1) expect_basic += mode_l2sq * (1.0 + sigma);
  CHECK(e.basic == doctest::Approx(expect_basic).epsilon(1e-12));
  // full adds ||eta||_4^2 + sigma ||eta||_5^2 with multiplier (1+1)^s
  double expect_full = expect_basic + mode_l2sq * std::pow(2.0, 4) +
                       sigma * mode_l2sq * std::pow(2.0, 5);
  CHECK(e.full == doctest::Approx(expect_full).epsilon(1e-12));

  // sigma = 0 energy carries no sigma branch
  auto e0 = energy(h, 2, 0.0);
  CHECK(e0.basic == doctest::Approx(5 * mode_l2sq).epsilon(1e-12));
}

TEST_CASE("subset and sigma monotonicity of the functionals") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 16, 8, 9);
  History h(6);
  for (int m = 0; m < 5; ++m) {
    Snapshot s = make_snap(g, 0.01 * m, 1e-2 * (1 + 0.1 * m), 1e-2, m);
    h.push(std::move(s));
  }
  double prevE = -1.0;
  for (double sigma : {0.0, 0.5, 1.0, 2.0}) {
    auto e = energy(h, 2, sigma);
    auto d = dissipation(h, 2, sigma, 0.3);
    CHECK(e.basic <= e.full);
    CHECK(d.basic <= d.full);
    CHECK(e.full >= prevE);
    prevE = e.full;
  }
}

TEST_CASE("transport and K functionals") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 16, 16, 9);
  Snapshot zero;
  zero.u = VectorVolumeField(g);
  zero.p = VolumeField(g);
  zero.eta = SurfaceField(g);
  zero.deta_dt = SurfaceField(g);
  CHECK(functional_F(zero, 2) == 0.0);
  CHECK(functional_K(zero) == 0.0);

  // single mode: F_2 = eps^2 L1 L2 (1+|xi|^2)^{9/2} / 2 for a cosine
  const double eps = 1e-3;
  Snapshot s = zero;
  s.eta = cos_mode(g, 1, 0, eps);
  double expect = eps * eps * g.area() * std::pow(2.0, 4.5) / 2.0;
  CHECK(functional_F(s, 2) == doctest::Approx(expect).epsilon(1e-12));

  // constant velocity: K = |c|^2 (1 + L1 L2)
  Snapshot c = zero;
  {
    auto sp = c.u.x.spec_mut();
    const size_t plane = (size_t)g.K1() * g.N2();
    for (int l = 0; l < g.N3(); ++l) sp[(size_t)l * plane] = 0.3;
  }
  {
    auto sp = c.u.z.spec_mut();
    const size_t plane = (size_t)g.K1() * g.N2();
    for (int l = 0; l < g.N3(); ++l) sp[(size_t)l * plane] = 0.4;
  }
  double csq = 0.3 * 0.3 + 0.4 * 0.4;
  CHECK(functional_K(c) ==
        doctest::Approx(csq * (1.0 + g.area())).epsilon(1e-10));
}

TEST_CASE("pressure-flux correction functional H") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 16, 16, 9);
  Params p;
  SUBCASE("zero state") {
    History h(5);
    for (int m = 0; m < 3; ++m) {
      Snapshot s;
      s.t = 0.01 * m;
      s.u = VectorVolumeField(g);
      s.p = VolumeField(g);
      s.eta = SurfaceField(g);
      s.deta_dt = SurfaceField(g);
      h.push(std::move(s));
    }
    CHECK(functional_H(h, 2, p) == 0.0);
  }
  SUBCASE("flat frozen surface kills both terms") {
    History h(5);
    for (int m = 0; m < 3; ++m) {
      Snapshot s;
      s.t = 0.01 * m;
      s.u = VectorVolumeField(g);
      s.u.x = (1.0 + m + m * m) * smooth_volume(g, 1, 0, 1e-2);
      s.p = (2.0 + m) * smooth_volume(g, 1, 1, 1e-2);
      s.eta = SurfaceField(g);  // J = 1, F^{2,2} = 0
      s.deta_dt = SurfaceField(g);
      h.push(std::move(s));
    }
    CHECK(std::abs(functional_H(h, 2, p)) <= 1e-14);
  }
}

TEST_CASE("budget residual on trivial trajectories") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 16, 8, 9);
  Params p;
  p.sigma = 1.0;
  p.gamma = 0.5;
  History h(5);
  for (int m = 0; m < 3; ++m) {
    Snapshot s;
    s.t = 0.01 * m;
    s.u = VectorVolumeField(g);
    s.p = VolumeField(g);
    s.eta = SurfaceField(g);
    s.deta_dt = SurfaceField(g);
    h.push(std::move(s));
  }
  CHECK(budget_residual(h, p, BudgetForm::flattened) == 0.0);
  CHECK(budget_residual(h, p, BudgetForm::geometric) == 0.0);
  History h1(5);
  {
    Snapshot s;
    s.u = VectorVolumeField(g);
    s.p = VolumeField(g);
    s.eta = SurfaceField(g);
    s.deta_dt = SurfaceField(g);
    h1.push(std::move(s));
  }
  CHECK_THROWS_AS(budget_residual(h1, p, BudgetForm::flattened),
                  std::invalid_argument);
}

TEST_CASE("budget residual of an equilibrium run stays at rounding level") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 8, 8, 9);
  Params p;
  p.sigma = 1.0;
  p.gamma = 0.5;
  StepConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 0.05;
  FlowState s = project_initial_data(VectorVolumeField(g), SurfaceField(g), p,
                                     g, cfg);
  std::optional<double> res;
  auto obs = [&](const FlowState& st) {
    if (st.history.size() >= 2)
      res = budget_residual(st.history, p, BudgetForm::flattened);
  };
  Trajectory tr = run(std::move(s), cfg, p, g, 1, obs, false);
  REQUIRE(tr.term.ok());
  REQUIRE(res.has_value());
  CHECK(std::abs(*res) <= 1e-12);
}

TEST_CASE("geometric and flattened budgets agree on a small-data run") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 16, 16, 17);
  Params p;
  p.sigma = 1.0;
  p.gamma = 0.05;
  StepConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.01;
  SurfaceField eta = cos_mode(g, 1, 0, 1e-3);
  FlowState s = project_initial_data(VectorVolumeField(g), eta, p, g, cfg);
  Trajectory tr = run(std::move(s), cfg, p, g, 1, {}, false);
  REQUIRE(tr.term.ok());
  // recompute on a short history assembled from a fresh run with samples
  FlowState s2 = project_initial_data(VectorVolumeField(g), eta, p, g, cfg);
  History h(6);
  h.push(s2.snapshot());
  Stepper st(g, p, cfg);
  for (int m = 0; m < 5; ++m) {
    st.step(s2);
    h.push(s2.snapshot());
  }
  double rf = budget_residual(h, p, BudgetForm::flattened, h.size() - 2);
  double rg = budget_residual(h, p, BudgetForm::geometric, h.size() - 2);
  // both forms witness the same first-order defect; they differ only at
  // higher order in the data
  CHECK(std::abs(rf - rg) <= 0.2 * std::max(std::abs(rf), std::abs(rg)));
}

TEST_CASE("decay fits recover exact models") {
  std::vector<double> t, Ee, Ea;
  for (int i = 0; i <= 60; ++i) {
    double tt = 0.25 * i;
    t.push_back(tt);
    Ee.push_back(std::exp(-2.0 * tt));
    Ea.push_back(std::pow(1.0 + tt, -4.0));
  }
  auto fe = fit_decay(t, Ee, DecayModel::exponential, 1.0);
  CHECK(fe.rate == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(fe.r2 == doctest::Approx(1.0).epsilon(1e-9));
  auto fa = fit_decay(t, Ea, DecayModel::algebraic, 1.0);
  CHECK(fa.rate == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(fa.r2 == doctest::Approx(1.0).epsilon(1e-9));

  std::vector<double> bad = Ee;
  bad[30] = 0.0;
  CHECK_THROWS_AS(fit_decay(t, bad, DecayModel::exponential, 1.0),
                  std::invalid_argument);
  std::vector<double> few(t.begin(), t.begin() + 5),
      fewE(Ee.begin(), Ee.begin() + 5);
  CHECK_THROWS_AS(fit_decay(few, fewE, DecayModel::exponential, 0.0),
                  std::invalid_argument);
}

TEST_CASE("reports carry the K-over-energy ratio implicitly") {
  // K <= C E_2-proxy direction: log the observed ratio over a run, assert
  // only finiteness (the constant is not quantified)
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 16, 16, 17);
  Params p;
  p.sigma = 1.0;
  p.gamma = 0.05;
  StepConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 0.2;
  SurfaceField eta = cos_mode(g, 1, 0, 1e-3);
  FlowState s = project_initial_data(VectorVolumeField(g), eta, p, g, cfg);
  double worst_ratio = 0.0;
  auto obs = [&](const FlowState& st) {
    FunctionalReport r = make_report(st.history, p, 2);
    if (r.E_full > 0) worst_ratio = std::max(worst_ratio, r.K / r.E_full);
  };
  Trajectory tr = run(std::move(s), cfg, p, g, 5, obs, false);
  REQUIRE(tr.term.ok());
  CHECK(std::isfinite(worst_ratio));
  CHECK(worst_ratio > 0.0);
  INFO("observed K / E_2 ratio: ", worst_ratio);
}

TEST_CASE("report fields and stable columns") {
  Grid g = make_grid(2 * kPi, 2 * kPi, 1.0, 16, 8, 9);
  Params p;
  p.sigma = 0.5;
  History h(6);
  for (int m = 0; m < 5; ++m) h.push(make_snap(g, 0.01 * m, 1e-3, 1e-3, m));
  FunctionalReport r = make_report(h, p, 2, true);
  CHECK(r.tier == 2);
  CHECK(r.E_basic <= r.E_full);
  CHECK(r.D_basic <= r.D_full);
  CHECK(r.budget_valid);
  CHECK(!r.terms.empty());
  auto cols = report_columns(2);
  auto vals = report_values(r);
  CHECK(cols.size() == vals.size());
}
