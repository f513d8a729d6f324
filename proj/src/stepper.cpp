#include "shearflow/stepper.hpp"

#include <cmath>
#include <optional>

#include "modesolver.hpp"
#include "shearflow/elliptic.hpp"
#include "shearflow/equilibrium.hpp"
#include "shearflow/forcing.hpp"
#include "shearflow/geometry.hpp"
#include "shearflow/ops.hpp"

namespace shearflow {

void StepConfig::validate() const {
  if (!(dt > 0)) throw std::invalid_argument("StepConfig: dt must be > 0");
  if (t_end < 0) throw std::invalid_argument("StepConfig: t_end must be >= 0");
  if (history_depth < 2)
    throw std::invalid_argument("StepConfig: history depth >= 2");
  if (!(j_min > 0 && j_min < 1))
    throw std::invalid_argument("StepConfig: j_min in (0,1)");
}

double StepConfig::kin_coeff(const Params& p, double b) const {
  if (std::isnan(kinematic_coeff)) return shear_profile(p.gamma, b, 0.0);
  return kinematic_coeff;
}

std::string TerminationRecord::reason_str() const {
  switch (reason) {
    case Reason::completed: return "completed";
    case Reason::domain_collapse: return "domain_collapse";
    case Reason::solver_failure: return "solver_failure";
    default: return "nan_detected";
  }
}

namespace {

bool finite_field(const VolumeField& f) {
  for (const auto& c : f.spec())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

SurfaceField surf_combo(const SurfaceField& a, double ca, const SurfaceField& b,
                        double cb) {
  SurfaceField out = ca * a;
  axpy(cb, b, out);
  return out;
}

}  // namespace

struct Stepper::Impl {
  Grid grid;
  Params params;
  StepConfig cfg;
  double kin_c;

  std::vector<std::optional<Eigen::PartialPivLU<Eigen::MatrixXcd>>> lu1, lu2;
  bool lu1_built = false, lu2_built = false;

  std::optional<ForcingBundle> prevG;
  bool have_prev = false;

  void build_lus(double lam,
                 std::vector<std::optional<Eigen::PartialPivLU<Eigen::MatrixXcd>>>& lus) {
    const int K1 = grid.K1(), N2 = grid.N2();
    lus.assign((size_t)K1 * N2, std::nullopt);
    for (int k2 = 0; k2 < N2; ++k2)
      for (int k1 = 0; k1 < K1; ++k1) {
        if (k1 == 0 && k2 == 0) continue;
        if (grid.nyquist1(k1) || grid.nyquist2(k2)) continue;
        detail::ModeBlockSpec spec = mode_spec(k1, k2, lam);
        Eigen::MatrixXcd M = detail::build_mode_block(grid, params, spec);
        lus[(size_t)k2 * K1 + k1].emplace(M);
      }
  }

  detail::ModeBlockSpec mode_spec(int k1, int k2, double lam) const {
    detail::ModeBlockSpec spec;
    spec.xi1 = grid.xi1(k1);
    spec.xi2 = grid.xi2(k2);
    spec.lam = lam;
    spec.dirichlet_top = false;
    spec.sprime_coupling = true;
    spec.sigma = params.sigma;
    spec.gamma = params.gamma;
    spec.beta = 1.0 / (lam + cplx(0.0, kin_c * spec.xi1));
    return spec;
  }

  // one implicit solve: advances (u, p, eta) given the assembled explicit
  // right-hand sides; lam is the mass coefficient, rzeta the kinematic rhs.
  void implicit_solve(FlowState& state, double lam,
                      const VectorVolumeField& rv, const VolumeField& rdiv,
                      const VectorSurfaceField& rstress,
                      const SurfaceField& rzeta,
                      std::vector<std::optional<Eigen::PartialPivLU<Eigen::MatrixXcd>>>& lus) {
    const Grid& g = grid;
    const int K1 = g.K1(), N2 = g.N2(), N3 = g.N3();
    VectorVolumeField v(g);
    VolumeField q(g);
    SurfaceField zeta(g);
    const cplx old_mean = state.eta.c(0, 0);

    for (int k2 = 0; k2 < N2; ++k2)
      for (int k1 = 0; k1 < K1; ++k1) {
        if (g.nyquist1(k1) || g.nyquist2(k2)) continue;
        detail::ModeBlockSpec spec = mode_spec(k1, k2, lam);
        Eigen::VectorXcd r1 = detail::gather_mode(rv.x, k1, k2);
        Eigen::VectorXcd r2 = detail::gather_mode(rv.y, k1, k2);
        Eigen::VectorXcd r3 = detail::gather_mode(rv.z, k1, k2);
        Eigen::VectorXcd rd = detail::gather_mode(rdiv, k1, k2);
        const cplx alpha = spec.beta * rzeta.c(k1, k2);
        const double xisq = spec.xi1 * spec.xi1 + spec.xi2 * spec.xi2;
        std::array<cplx, 3> top;
        top[0] = rstress[0].c(k1, k2) - params.gamma * alpha;
        top[1] = rstress[1].c(k1, k2);
        top[2] = rstress[2].c(k1, k2) + (1.0 + params.sigma * xisq) * alpha;

        Eigen::VectorXcd x;
        if (k1 == 0 && k2 == 0) {
          auto z = detail::solve_zero_mode(g, params, spec, r1, r2, r3, rd, top);
          x.resize(4 * N3);
          x << z.v1, z.v2, z.v3, z.q;
        } else {
          Eigen::VectorXcd b =
              detail::assemble_mode_rhs(g, spec, r1, r2, r3, rd, top);
          x = lus[(size_t)k2 * K1 + k1]->solve(b);
        }
        detail::scatter_mode(v.x, k1, k2, x.segment(0, N3));
        detail::scatter_mode(v.y, k1, k2, x.segment(N3, N3));
        detail::scatter_mode(v.z, k1, k2, x.segment(2 * N3, N3));
        detail::scatter_mode(q, k1, k2, x.segment(3 * N3, N3));
        zeta.spec_mut()[(size_t)k2 * K1 + k1] =
            alpha + spec.beta * x(2 * N3 + N3 - 1);
      }

    v.x.enforce_hermitian();
    v.y.enforce_hermitian();
    v.z.enforce_hermitian();
    q.enforce_hermitian();
    zeta.enforce_hermitian();
    // conserve the surface mean exactly
    zeta.spec_mut()[0] = old_mean;

    if (!finite_field(v.x) || !finite_field(v.y) || !finite_field(v.z) ||
        !finite_field(q))
      throw std::runtime_error("nan detected in implicit solve");

    state.u = std::move(v);
    state.p = std::move(q);
    state.eta = std::move(zeta);
  }
};

Stepper::Stepper(const Grid& grid, const Params& params, const StepConfig& cfg)
    : impl_(std::make_unique<Impl>()) {
  params.validate();
  cfg.validate();
  if (params.mu != 1.0)
    throw std::invalid_argument(
        "Stepper: requires the mu = 1 normalization of the governing system");
  impl_->grid = grid;
  impl_->params = params;
  impl_->cfg = cfg;
  impl_->kin_c = cfg.kin_coeff(params, grid.b());
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

const StepConfig& Stepper::config() const { return impl_->cfg; }

void Stepper::step(FlowState& state) {
  Impl& im = *impl_;
  const Grid& g = im.grid;
  const double dt = im.cfg.dt;

  GeometryCache cache =
      build_geometry(state.eta, &state.deta_dt, im.params, im.cfg.j_min);
  ForcingBundle G = compute_G(state.snapshot(), cache, im.params);

  const bool second_order =
      im.cfg.scheme == StepConfig::Scheme::imex2 && im.have_prev &&
      state.history.size() >= 2;

  if (second_order) {
    if (!im.lu2_built) {
      im.build_lus(1.5 / dt, im.lu2);
      im.lu2_built = true;
    }
    const Snapshot& prev = state.history[state.history.size() - 2];
    const ForcingBundle& Gp = *im.prevG;
    // BDF2 mass terms and 2nd order extrapolated forcing
    VectorVolumeField rv(g);
    for (int i = 0; i < 3; ++i) {
      rv.comp(i) = (2.0 / dt) * state.u.comp(i);
      axpy(-0.5 / dt, prev.u.comp(i), rv.comp(i));
      axpy(2.0, G.momentum_hat.comp(i), rv.comp(i));
      axpy(2.0, G.momentum_tilde.comp(i), rv.comp(i));
      axpy(-1.0, Gp.momentum_hat.comp(i), rv.comp(i));
      axpy(-1.0, Gp.momentum_tilde.comp(i), rv.comp(i));
    }
    VolumeField rdiv = 2.0 * G.divergence - Gp.divergence;
    VectorSurfaceField rstress;
    VectorSurfaceField Gs = G.stress(), Gps = Gp.stress();
    for (int i = 0; i < 3; ++i) rstress[i] = surf_combo(Gs[i], 2.0, Gps[i], -1.0);
    SurfaceField rzeta = (2.0 / dt) * state.eta;
    axpy(-0.5 / dt, prev.eta, rzeta);
    SurfaceField G4 = G.kinematic(), G4p = Gp.kinematic();
    const double s0 = shear_profile(im.params.gamma, g.b(), 0.0);
    if (im.kin_c != s0) {  // configured transport coefficient differs from
                           // the s(0) baked into the forcing bundle
      axpy(im.kin_c - s0, diff(state.eta, 1), G4);
      axpy(im.kin_c - s0, diff(prev.eta, 1), G4p);
    }
    axpy(2.0, G4, rzeta);
    axpy(-1.0, G4p, rzeta);
    im.implicit_solve(state, 1.5 / dt, rv, rdiv, rstress, rzeta, im.lu2);
  } else {
    if (!im.lu1_built) {
      im.build_lus(1.0 / dt, im.lu1);
      im.lu1_built = true;
    }
    VectorVolumeField rv(g);
    for (int i = 0; i < 3; ++i) {
      rv.comp(i) = (1.0 / dt) * state.u.comp(i);
      axpy(1.0, G.momentum_hat.comp(i), rv.comp(i));
      axpy(1.0, G.momentum_tilde.comp(i), rv.comp(i));
    }
    VectorSurfaceField rstress = G.stress();
    SurfaceField rzeta = (1.0 / dt) * state.eta;
    SurfaceField G4 = G.kinematic();
    const double s0 = shear_profile(im.params.gamma, g.b(), 0.0);
    if (im.kin_c != s0) axpy(im.kin_c - s0, diff(state.eta, 1), G4);
    axpy(1.0, G4, rzeta);
    im.implicit_solve(state, 1.0 / dt, rv, G.divergence, rstress, rzeta,
                      im.lu1);
  }

  state.t += dt;
  state.deta_dt = kinematic_rate(state.u, state.eta, im.params);
  state.history.push(state.snapshot());
  im.prevG = std::move(G);
  im.have_prev = true;
}

// ---------------------------------------------------------------------------

namespace {

// flat Poisson solve (D^2 - |xi|^2) phi = r with phi(top) = 0 and
// d3 phi(bottom) = 0, per horizontal mode
VolumeField poisson_flat(const VolumeField& rhs) {
  const Grid& g = rhs.grid();
  const int N3 = g.N3();
  VolumeField phi(g);
  const Eigen::MatrixXd& D = g.dmat(1);
  const Eigen::MatrixXd& D2 = g.dmat(2);
  for (int k2 = 0; k2 < g.N2(); ++k2)
    for (int k1 = 0; k1 < g.K1(); ++k1) {
      if (g.nyquist1(k1) || g.nyquist2(k2)) continue;
      Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N3, N3);
      const double xisq = g.xi_sq(k1, k2);
      for (int l = 1; l < N3 - 1; ++l) {
        for (int m = 0; m < N3; ++m) M(l, m) = D2(l, m);
        M(l, l) -= xisq;
      }
      for (int m = 0; m < N3; ++m) M(0, m) = D(0, m);  // Neumann bottom
      M(N3 - 1, N3 - 1) = 1.0;                         // Dirichlet top
      Eigen::VectorXcd b = detail::gather_mode(rhs, k1, k2);
      b(0) = 0.0;
      b(N3 - 1) = 0.0;
      detail::scatter_mode(phi, k1, k2, M.partialPivLu().solve(b));
    }
  return phi;
}

double vec_l2(const VectorVolumeField& u) {
  double a = l2_volume(u.x), b = l2_volume(u.y), c = l2_volume(u.z);
  return std::sqrt(a * a + b * b + c * c);
}

}  // namespace

FlowState project_initial_data(const VectorVolumeField& u0,
                               const SurfaceField& eta0, const Params& params,
                               const Grid& grid, const StepConfig& cfg,
                               ProjectionReport* report) {
  params.validate();
  cfg.validate();

  FlowState state(grid, cfg.history_depth);

  // zero-average shift
  SurfaceField eta = eta0;
  double mean = eta.c(0, 0).real();
  {
    auto s = eta.spec_mut();
    s[0] = 0.0;
  }
  double eta_min = 0.0;
  for (double v : eta.phys()) eta_min = std::min(eta_min, v);
  if (eta_min <= -grid.b())
    throw std::invalid_argument(
        "project_initial_data: eta0 touches the bottom");

  // metric-divergence-free projection via flat-Laplacian fixed point
  GeometryCache cache = build_geometry(eta, nullptr, params, cfg.j_min);
  VectorVolumeField u = u0;
  double displacement = 0.0;
  double unorm = vec_l2(u0);
  if (unorm > 0.0) {
    VolumeField phi(grid);
    VolumeField r = div_a(u0, cache);
    const double tol = 1e-11 * std::max(1.0, unorm);
    for (int it = 0; it < 50; ++it) {
      if (sup_norm(r) < tol) break;
      axpy(1.0, poisson_flat(r), phi);
      VectorVolumeField gp = grad_a(phi, cache);
      for (int i = 0; i < 3; ++i) {
        u.comp(i) = u0.comp(i);
        axpy(-1.0, gp.comp(i), u.comp(i));
      }
      r = div_a(u, cache);
      if (it == 49 && sup_norm(r) >= tol)
        throw std::runtime_error(
            "project_initial_data: projection iteration stalled");
    }
    VectorVolumeField d(grid);
    for (int i = 0; i < 3; ++i) {
      d.comp(i) = u0.comp(i);
      axpy(-1.0, u.comp(i), d.comp(i));
    }
    displacement = vec_l2(d);
  }

  // initial pressure from one stress-Stokes solve with the linear surface data
  VolumeField p0(grid);
  {
    SurfaceField lap_eta = diff(eta, 1, 2) + diff(eta, 2, 2);
    VectorSurfaceField f3;
    f3[0] = (-params.gamma) * eta;
    f3[1] = SurfaceField(grid);
    f3[2] = eta - params.sigma * lap_eta;
    StokesSolution sol = solve_stokes_stress(VectorVolumeField(grid),
                                             VolumeField(grid), f3, params,
                                             grid);
    p0 = sol.p;
  }

  state.t = 0.0;
  state.u = std::move(u);
  state.p = std::move(p0);
  state.eta = std::move(eta);
  state.deta_dt = kinematic_rate(state.u, state.eta, params);
  state.history.push(state.snapshot());

  if (report) {
    report->displacement = displacement;
    report->eta_shift = mean;
  }
  return state;
}

double cfl_advisory(const FlowState& state, const Params& params) {
  const Grid& g = state.grid();
  double umax = 0.0;
  for (int i = 0; i < 3; ++i) umax = std::max(umax, sup_norm(state.u.comp(i)));
  double speed = umax + shear_profile(params.gamma, g.b(), 0.0);
  double dx = std::min(g.L1() / g.N1(), g.L2() / g.N2());
  return speed > 0 ? dx / speed : std::numeric_limits<double>::infinity();
}

Trajectory run(FlowState state, const StepConfig& cfg, const Params& params,
               const Grid& grid, int sample_cadence,
               const std::function<void(const FlowState&)>& observer,
               bool keep_samples) {
  cfg.validate();
  Trajectory traj;
  traj.cfl_advisory_dt = cfl_advisory(state, params);
  Stepper stepper(grid, params, cfg);

  const double mean0 = integral_surface(state.eta);
  auto note = [&](const FlowState& s) {
    traj.mean_drift = std::max(
        traj.mean_drift, std::abs(integral_surface(s.eta) - mean0));
    if (observer) observer(s);
  };

  if (state.history.size() == 0) state.history.push(state.snapshot());
  note(state);
  if (keep_samples) traj.samples.push_back(state.snapshot());

  const long nsteps = std::lround((cfg.t_end - state.t) / cfg.dt);
  try {
    for (long n = 1; n <= nsteps; ++n) {
      stepper.step(state);
      const bool sample = (n % std::max(1, sample_cadence) == 0) || n == nsteps;
      if (sample) {
        note(state);
        if (keep_samples) traj.samples.push_back(state.snapshot());
      }
    }
    traj.term.reason = TerminationRecord::Reason::completed;
  } catch (const DomainCollapse& e) {
    traj.term.reason = TerminationRecord::Reason::domain_collapse;
    traj.term.detail = e.what();
  } catch (const std::exception& e) {
    traj.term.reason =
        std::string(e.what()).find("nan") != std::string::npos
            ? TerminationRecord::Reason::nan_detected
            : TerminationRecord::Reason::solver_failure;
    traj.term.detail = e.what();
  }
  traj.term.t_last = state.t;
  return traj;
}

}  // namespace shearflow
