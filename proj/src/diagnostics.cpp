#include "shearflow/diagnostics.hpp"

#include <cmath>
#include <numeric>

#include "shearflow/equilibrium.hpp"
#include "shearflow/forcing.hpp"
#include "shearflow/geometry.hpp"
#include "timediff.hpp"

namespace shearflow {

namespace {

std::vector<double> newest_times(const History& h, int npts) {
  std::vector<double> t(npts);
  const int first = h.size() - npts;
  for (int m = 0; m < npts; ++m) t[m] = h[first + m].t;
  return t;
}

double sq(double x) { return x * x; }

// squared L2(Omega) of a spectral field weighted by a per-mode horizontal
// multiplier, Nyquist modes excluded
double weighted_l2sq(const VolumeField& f,
                     const std::function<double(int, int)>& w) {
  const Grid& g = f.grid();
  auto sp = f.spec();
  const int K1 = g.K1(), N2 = g.N2(), N3 = g.N3();
  double acc = 0.0;
  for (int l = 0; l < N3; ++l) {
    double sl = 0.0;
    for (int k2 = 0; k2 < N2; ++k2) {
      if (g.nyquist2(k2)) continue;
      for (int k1 = 0; k1 < K1; ++k1) {
        if (g.nyquist1(k1)) continue;
        sl += g.hermitian_weight(k1) * w(k1, k2) *
              std::norm(sp[((size_t)l * N2 + k2) * K1 + k1]);
      }
    }
    acc += g.w3()[l] * sl;
  }
  return acc * g.area();
}

double weighted_l2sq(const SurfaceField& f,
                     const std::function<double(int, int)>& w) {
  const Grid& g = f.grid();
  auto sp = f.spec();
  const int K1 = g.K1(), N2 = g.N2();
  double acc = 0.0;
  for (int k2 = 0; k2 < N2; ++k2) {
    if (g.nyquist2(k2)) continue;
    for (int k1 = 0; k1 < K1; ++k1) {
      if (g.nyquist1(k1)) continue;
      acc += g.hermitian_weight(k1) * w(k1, k2) *
             std::norm(sp[(size_t)k2 * K1 + k1]);
    }
  }
  return acc * g.area();
}

// sum over horizontal multi-indices a1 + a2 <= m of xi1^{2a1} xi2^{2a2}
double horiz_poly(const Grid& g, int k1, int k2, int m) {
  const double a = sq(g.xi1(k1)), b = sq(g.xi2(k2));
  double total = 0.0;
  double apow = 1.0;
  for (int a1 = 0; a1 <= m; ++a1) {
    double bpow = 1.0;
    for (int a2 = 0; a1 + a2 <= m; ++a2) {
      total += apow * bpow;
      bpow *= b;
    }
    apow *= a;
  }
  return total;
}

double surf_hs_sq(const SurfaceField& f, double s) {
  double n = sobolev_norm_surface(f, s);
  return n * n;
}

double vol_hk_sq(const VolumeField& f, int k) {
  double n = sobolev_norm_volume(f, k);
  return n * n;
}

double vec_hk_sq(const VectorVolumeField& u, int k) {
  return vol_hk_sq(u.x, k) + vol_hk_sq(u.y, k) + vol_hk_sq(u.z, k);
}

// quadrature integral of the pointwise product of physical fields
double integral_product(const VolumeField& a, const VolumeField& b) {
  const Grid& g = a.grid();
  auto pa = a.phys();
  auto pb = b.phys();
  const size_t plane = (size_t)g.N1() * g.N2();
  double acc = 0.0;
  for (int l = 0; l < g.N3(); ++l) {
    double sl = 0.0;
    for (size_t i = 0; i < plane; ++i)
      sl += pa[(size_t)l * plane + i] * pb[(size_t)l * plane + i];
    acc += g.w3()[l] * sl;
  }
  return acc * g.horiz_weight();
}

double integral_product(const SurfaceField& a, const SurfaceField& b) {
  auto pa = a.phys();
  auto pb = b.phys();
  double acc = 0.0;
  for (size_t i = 0; i < pa.size(); ++i) acc += pa[i] * pb[i];
  return acc * a.grid().horiz_weight();
}

}  // namespace

TimeDerivs temporal_derivatives(const History& h, int j_max,
                                bool pde_substitute_du, const Params* params) {
  if (h.size() < j_max + 1)
    throw std::invalid_argument("temporal_derivatives: insufficient history");
  if (!h.uniform(j_max + 1))
    throw std::invalid_argument("temporal_derivatives: non-uniform spacing");
  const int npts = j_max + 1;
  const int first = h.size() - npts;
  auto times = newest_times(h, npts);

  TimeDerivs td;
  td.j_max = j_max;
  std::array<std::vector<VolumeField>, 3> Qu;
  std::vector<VolumeField> Qp;
  std::vector<SurfaceField> Qeta;
  for (int m = 0; m < npts; ++m) {
    for (int i = 0; i < 3; ++i) Qu[i].push_back(h[first + m].u.comp(i));
    Qp.push_back(h[first + m].p);
    Qeta.push_back(h[first + m].eta);
  }
  for (int j = 0; j <= j_max; ++j) {
    VectorVolumeField uj(h.newest().u.grid());
    uj.x = detail::time_deriv(Qu[0], times, j);
    uj.y = detail::time_deriv(Qu[1], times, j);
    uj.z = detail::time_deriv(Qu[2], times, j);
    td.u.push_back(std::move(uj));
    td.p.push_back(detail::time_deriv(Qp, times, j));
    td.eta.push_back(detail::time_deriv(Qeta, times, j));
  }

  if (pde_substitute_du && j_max >= 1) {
    if (!params)
      throw std::invalid_argument(
          "temporal_derivatives: params required for PDE substitution");
    const Snapshot& s = h.newest();
    GeometryCache cache = build_geometry(s.eta, &s.deta_dt, *params);
    VectorVolumeField zero(s.u.grid());
    ResidualFields r = residual_geometric(s, zero, cache, *params);
    for (int i = 0; i < 3; ++i) td.u[1].comp(i) = -1.0 * r.momentum.comp(i);
  }
  return td;
}

EnergyPair energy(const History& h, int n, double sigma,
                  std::map<std::string, double>* terms) {
  if (n < 2) throw std::invalid_argument("energy: tier n >= 2 required");
  const int avail = std::min(n, h.size() - 1);
  TimeDerivs td = temporal_derivatives(h, avail);
  const Grid& g = h.newest().u.grid();

  auto put = [&](const std::string& k, double v) {
    if (terms) (*terms)[k] = v;
  };

  // basic: sum over parabolic alpha with |alpha| <= 2n of horizontal
  // derivative L2 norms, folded into per-mode polynomial multipliers
  double Ebar_u = 0.0, Ebar_eta = 0.0, Ebar_grad = 0.0;
  for (int a0 = 0; a0 <= std::min(n, avail); ++a0) {
    const int m = 2 * n - 2 * a0;
    auto w = [&](int k1, int k2) { return horiz_poly(g, k1, k2, m); };
    auto wg = [&](int k1, int k2) {
      return horiz_poly(g, k1, k2, m) * g.xi_sq(k1, k2);
    };
    for (int i = 0; i < 3; ++i) Ebar_u += weighted_l2sq(td.u[a0].comp(i), w);
    Ebar_eta += weighted_l2sq(td.eta[a0], w);
    Ebar_grad += weighted_l2sq(td.eta[a0], wg);
  }
  double E_basic = Ebar_u + Ebar_eta + sigma * Ebar_grad;
  put("Ebar_u", Ebar_u);
  put("Ebar_eta", Ebar_eta);
  put("Ebar_grad_eta", Ebar_grad);

  double E = E_basic;
  for (int j = 0; j <= std::min(n, avail); ++j) {
    double t = vec_hk_sq(td.u[j], 2 * n - 2 * j);
    put("E_u_j" + std::to_string(j), t);
    E += t;
  }
  for (int j = 0; j <= std::min(n - 1, avail); ++j) {
    double t = vol_hk_sq(td.p[j], 2 * n - 2 * j - 1);
    put("E_p_j" + std::to_string(j), t);
    E += t;
  }
  {
    double t0 = surf_hs_sq(td.eta[0], 2 * n);
    double t0s = surf_hs_sq(td.eta[0], 2 * n + 1);
    put("E_eta", t0);
    put("E_eta_sigma", t0s);
    E += t0 + sigma * t0s;
  }
  if (avail >= 1) {
    double t1 = surf_hs_sq(td.eta[1], 2 * n - 1);
    double t1s = surf_hs_sq(td.eta[1], 2 * n - 0.5);
    put("E_etat", t1);
    put("E_etat_sigma", t1s);
    E += t1 + sigma * t1s;
  }
  for (int j = 2; j <= std::min(n, avail); ++j) {
    double t = surf_hs_sq(td.eta[j], 2 * n - 2 * j + 1.5);
    put("E_eta_j" + std::to_string(j), t);
    E += t;
  }
  return {E_basic, E};
}

DissipationPair dissipation(const History& h, int n, double sigma,
                            double gamma,
                            std::map<std::string, double>* terms) {
  if (n < 2) throw std::invalid_argument("dissipation: tier n >= 2 required");
  const int avail = std::min(n + 1, h.size() - 1);
  TimeDerivs td = temporal_derivatives(h, avail);
  const Grid& g = h.newest().u.grid();

  auto put = [&](const std::string& k, double v) {
    if (terms) (*terms)[k] = v;
  };

  // basic: || D d^alpha u ||_0^2 over parabolic alpha
  double Dbar = 0.0;
  for (int a0 = 0; a0 <= std::min(n, avail); ++a0) {
    const int m = 2 * n - 2 * a0;
    auto w = [&](int k1, int k2) { return horiz_poly(g, k1, k2, m); };
    SymTensorVolumeField Du = sym_grad(td.u[a0]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        Dbar += weighted_l2sq(Du.comp(i, j), w);
  }
  put("Dbar", Dbar);

  double D = Dbar;
  for (int j = 0; j <= std::min(n, avail); ++j) {
    double t = vec_hk_sq(td.u[j], 2 * n - 2 * j + 1);
    put("D_u_j" + std::to_string(j), t);
    D += t;
  }
  for (int j = 0; j <= std::min(n - 1, avail); ++j) {
    double t = vol_hk_sq(td.p[j], 2 * n - 2 * j);
    put("D_p_j" + std::to_string(j), t);
    D += t;
  }
  for (int j = 0; j <= std::min(n - 1, avail); ++j) {
    double ta = surf_hs_sq(td.eta[j], 2 * n - 2 * j - 0.5);
    double tb = surf_hs_sq(td.eta[j], 2 * n - 2 * j + 1.5);
    put("D_eta_lo_j" + std::to_string(j), ta);
    put("D_eta_hi_j" + std::to_string(j), tb);
    D += (1.0 + gamma * gamma) * ta + sigma * sigma * tb;
  }
  if (avail >= 1) {
    double t = surf_hs_sq(td.eta[1], 2 * n - 1);
    double ts = surf_hs_sq(td.eta[1], 2 * n + 0.5);
    put("D_etat", t);
    put("D_etat_sigma", ts);
    D += t + sigma * sigma * ts;
  }
  if (avail >= 2) {
    double t = surf_hs_sq(td.eta[2], 2 * n - 2);
    double ts = surf_hs_sq(td.eta[2], 2 * n - 1.5);
    put("D_etatt", t);
    put("D_etatt_sigma", ts);
    D += t + sigma * sigma * ts;
  }
  for (int j = 3; j <= std::min(n + 1, avail); ++j) {
    double t = surf_hs_sq(td.eta[j], 2 * n - 2 * j + 2.5);
    put("D_eta_j" + std::to_string(j), t);
    D += t;
  }
  return {Dbar, D};
}

double functional_F(const Snapshot& s, int n) {
  return surf_hs_sq(s.eta, 2 * n + 0.5);
}
double functional_F(const FlowState& s, int n) {
  return surf_hs_sq(s.eta, 2 * n + 0.5);
}

double functional_K(const Snapshot& s) {
  const Grid& g = s.u.grid();
  // collocation-node sup of the vector magnitude of each derivative up to
  // order 2 (a lower bound of the true C^2_b norm)
  double c2b_sq = 0.0;
  for (int a1 = 0; a1 <= 2; ++a1)
    for (int a2 = 0; a1 + a2 <= 2; ++a2)
      for (int a3 = 0; a1 + a2 + a3 <= 2; ++a3) {
        std::array<std::span<const double>, 3> ph;
        std::array<VolumeField, 3> fields;
        for (int i = 0; i < 3; ++i) {
          VolumeField f = s.u.comp(i);
          if (a1) f = diff(f, 1, a1);
          if (a2) f = diff(f, 2, a2);
          if (a3) f = diff(f, 3, a3);
          fields[i] = std::move(f);
        }
        for (int i = 0; i < 3; ++i) ph[i] = fields[i].phys();
        for (size_t idx = 0; idx < ph[0].size(); ++idx) {
          double m = sq(ph[0][idx]) + sq(ph[1][idx]) + sq(ph[2][idx]);
          c2b_sq = std::max(c2b_sq, m);
        }
      }
  double trace3 = 0.0;
  for (int i = 0; i < 3; ++i)
    trace3 += surf_hs_sq(trace_surface(s.u.comp(i)), 3.0);
  (void)g;
  return c2b_sq + trace3 + surf_hs_sq(s.eta, 2.5);
}

double functional_H(const History& h, int n, const Params& params) {
  if (h.size() < n + 1)
    throw std::invalid_argument("functional_H: insufficient history");
  CommutatorForcing F = compute_F(h, params, n);
  TimeDerivs td = temporal_derivatives(h, n);
  const Snapshot& s = h.newest();
  GeometryCache cache = build_geometry(s.eta, &s.deta_dt, params);

  // -dt^{n-1} p F^{2,n} J
  VolumeField pF = multiply(td.p[n - 1], F.divergence);
  double term1 = -integral_product(pF, cache.jacobian);
  // |dt^n u|^2 (J - 1) / 2
  VolumeField Jm1 = cache.jacobian;
  {
    auto sp = Jm1.spec_mut();
    const Grid& g = s.u.grid();
    const size_t plane = (size_t)g.K1() * g.N2();
    for (int l = 0; l < g.N3(); ++l) sp[(size_t)l * plane] -= 1.0;
  }
  double term2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    VolumeField usq = multiply(td.u[n].comp(i), td.u[n].comp(i));
    term2 += 0.5 * integral_product(usq, Jm1);
  }
  return term1 + term2;
}

namespace {

double bracket_energy(const Snapshot& s, const Params& params, BudgetForm form,
                      const GeometryCache* cache) {
  double vol = 0.0;
  if (form == BudgetForm::geometric) {
    for (int i = 0; i < 3; ++i)
      vol += 0.5 * integral_product(multiply(s.u.comp(i), s.u.comp(i)),
                                    cache->jacobian);
  } else {
    for (int i = 0; i < 3; ++i) {
      double n = l2_volume(s.u.comp(i));
      vol += 0.5 * n * n;
    }
  }
  double se = 0.5 * sq(l2_surface(s.eta));
  SurfaceField d1 = diff(s.eta, 1), d2 = diff(s.eta, 2);
  double sg = 0.5 * params.sigma * (sq(l2_surface(d1)) + sq(l2_surface(d2)));
  return vol + se + sg;
}

// right-hand side of the chosen identity at one snapshot (everything except
// the d/dt bracket), with the dissipation moved over: rhs - dissipation
double budget_rhs(const Snapshot& s, const Params& params, BudgetForm form) {
  const Grid& g = s.u.grid();
  GeometryCache cache = build_geometry(s.eta, &s.deta_dt, params);
  double total = 0.0;

  if (form == BudgetForm::flattened) {
    ForcingBundle G = compute_G(s, cache, params);
    // -1/2 int |D u|^2
    SymTensorVolumeField Du = sym_grad(s.u);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        total -= 0.5 * sq(l2_volume(Du.comp(i, j)));
    // gamma interaction terms
    {
      VolumeField u31 = multiply(s.u.z, s.u.x);
      std::vector<double> x3(g.N3());
      for (int l = 0; l < g.N3(); ++l) x3[l] = g.x3(l);
      total += params.gamma * integral_volume(scale_by_profile(u31, x3));
      total +=
          params.gamma * integral_product(s.eta, trace_surface(s.u.x));
    }
    // forcing pairings
    VectorVolumeField G1 = G.momentum();
    for (int i = 0; i < 3; ++i)
      total += integral_product(s.u.comp(i), G1.comp(i));
    total += integral_product(s.p, G.divergence);
    VectorSurfaceField G3 = G.stress();
    for (int i = 0; i < 3; ++i)
      total -= integral_product(trace_surface(s.u.comp(i)), G3[i]);
    SurfaceField lap = diff(s.eta, 1, 2) + diff(s.eta, 2, 2);
    total += integral_product(s.eta - params.sigma * lap, G.kinematic());
  } else {
    // -1/2 int |D_A u|^2 J
    SymTensorVolumeField Du = sym_grad_a(s.u, cache);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        VolumeField sqf = multiply(Du.comp(i, j), Du.comp(i, j));
        total -= 0.5 * integral_product(sqf, cache.jacobian);
      }
    // gamma Phi3 u3 u1 J
    {
      VolumeField u31 = multiply(s.u.z, s.u.x);
      VolumeField ju = multiply(u31, cache.jacobian);
      total += params.gamma * integral_product(ju, cache.phi3);
      // gamma eta (M N).u on Sigma; M N = (1, 0, -d1 eta)
      SurfaceField mu = trace_surface(s.u.x) -
                        multiply(diff(s.eta, 1), trace_surface(s.u.z));
      total += params.gamma * integral_product(s.eta, mu);
    }
    // the transport remainder (zeta - sigma lap zeta)(gamma/2) eta^2 d1 zeta
    // (the F pairings vanish at j = 0 by convention)
    if (params.gamma != 0.0) {
      SurfaceField lap = diff(s.eta, 1, 2) + diff(s.eta, 2, 2);
      SurfaceField e2d1 = multiply(multiply(s.eta, s.eta), diff(s.eta, 1));
      total += 0.5 * params.gamma *
               integral_product(s.eta - params.sigma * lap, e2d1);
    }
  }
  return total;
}

}  // namespace

double budget_rate(const Snapshot& s, const Params& params, BudgetForm form) {
  return budget_rhs(s, params, form);
}

double budget_residual(const History& h, const Params& params, BudgetForm form,
                       int at, double /*kinematic_coeff*/) {
  if (h.size() < 2)
    throw std::invalid_argument("budget_residual: need at least 2 snapshots");
  int i = (at < 0) ? h.size() - 1 : at;
  if (i <= 0 || i >= h.size())
    throw std::invalid_argument("budget_residual: snapshot index out of range");

  auto bracket = [&](int m) {
    GeometryCache c = build_geometry(h[m].eta, &h[m].deta_dt, params);
    return bracket_energy(h[m], params, form, &c);
  };

  double dBdt;
  if (i + 1 < h.size()) {
    dBdt = (bracket(i + 1) - bracket(i - 1)) / (h[i + 1].t - h[i - 1].t);
  } else {
    dBdt = (bracket(i) - bracket(i - 1)) / (h[i].t - h[i - 1].t);
  }
  return dBdt - budget_rhs(h[i], params, form);
}

FitResult fit_decay(std::span<const double> t, std::span<const double> E,
                    DecayModel model, double t_min) {
  if (t.size() != E.size())
    throw std::invalid_argument("fit_decay: length mismatch");
  std::vector<double> x, y;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_min) continue;
    if (!(E[i] > 0.0) || !std::isfinite(E[i]))
      throw std::invalid_argument("fit_decay: degenerate series");
    x.push_back(model == DecayModel::exponential ? t[i] : std::log1p(t[i]));
    y.push_back(std::log(E[i]));
  }
  if (x.size() < 10)
    throw std::invalid_argument("fit_decay: need >= 10 samples past cutoff");
  const size_t n = x.size();
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += sq(x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += sq(y[i] - my);
  }
  double slope = sxy / sxx;
  FitResult r;
  r.rate = -slope;
  r.log_amplitude = my - slope * mx;
  r.n_samples = (int)n;
  double ssres = 0.0;
  for (size_t i = 0; i < n; ++i)
    ssres += sq(y[i] - (r.log_amplitude + slope * x[i]));
  r.r2 = (syy > 0) ? 1.0 - ssres / syy : 1.0;
  return r;
}

FunctionalReport make_report(const History& h, const Params& params, int tier,
                             bool with_terms) {
  FunctionalReport r;
  const Snapshot& s = h.newest();
  r.t = s.t;
  r.tier = tier;
  r.sigma = params.sigma;
  r.derivs_available = h.size() - 1;
  r.mean_eta = integral_surface(s.eta);

  std::map<std::string, double>* tp = with_terms ? &r.terms : nullptr;
  auto e = energy(h, tier, params.sigma, tp);
  r.E_basic = e.basic;
  r.E_full = e.full;
  auto d = dissipation(h, tier, params.sigma, params.gamma, tp);
  r.D_basic = d.basic;
  r.D_full = d.full;
  r.F_n = functional_F(s, tier);
  r.K = functional_K(s);
  if (h.size() >= tier + 1) {
    r.H_n = functional_H(h, tier, params);
  }
  if (h.size() >= 2) {
    r.budget_res = budget_residual(h, params, BudgetForm::flattened);
    r.budget_valid = true;
  }
  return r;
}

void CompositeAccumulator::add(const History& h, const Params& params) {
  const double t = h.newest().t;
  auto e2n = energy(h, 2 * N_, params.sigma);
  auto en2 = energy(h, N_ + 2, params.sigma);
  auto d2n = dissipation(h, 2 * N_, params.sigma, params.gamma);
  sup_E2N_ = std::max(sup_E2N_, e2n.full);
  sup_weighted_EN2_ = std::max(
      sup_weighted_EN2_, std::pow(1.0 + t, 4.0 * N_ - 8.0) * en2.full);
  double F2N = functional_F(h.newest(), 2 * N_);
  sup_F2N_ = std::max(sup_F2N_, F2N / (1.0 + t));
  if (have_last_) int_D2N_ += 0.5 * (last_D_ + d2n.full) * (t - last_t_);
  last_t_ = t;
  last_D_ = d2n.full;
  have_last_ = true;
}

double CompositeAccumulator::value() const {
  return sup_E2N_ + int_D2N_ + sup_weighted_EN2_ + sup_F2N_;
}

std::vector<std::string> report_columns(int /*tier*/) {
  return {"t",        "tier",  "sigma", "E_basic", "E_full",
          "D_basic",  "D_full", "F_n",  "K",       "H_n",
          "budget_res", "budget_valid", "mean_eta", "derivs_available"};
}

std::vector<double> report_values(const FunctionalReport& r) {
  return {r.t,
          (double)r.tier,
          r.sigma,
          r.E_basic,
          r.E_full,
          r.D_basic,
          r.D_full,
          r.F_n,
          r.K,
          r.H_n,
          r.budget_res,
          r.budget_valid ? 1.0 : 0.0,
          r.mean_eta,
          (double)r.derivs_available};
}

}  // namespace shearflow
