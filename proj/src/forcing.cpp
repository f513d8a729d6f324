#include "shearflow/forcing.hpp"

#include <cmath>

#include "shearflow/equilibrium.hpp"
#include "timediff.hpp"

namespace shearflow {

namespace {

std::vector<double> shear_values(const Params& p, const Grid& g) {
  std::vector<double> s(g.N3());
  for (int l = 0; l < g.N3(); ++l)
    s[l] = shear_profile(p.gamma, g.b(), g.x3(l));
  return s;
}

std::vector<double> shear_deriv_values(const Params& p, const Grid& g) {
  std::vector<double> s(g.N3());
  for (int l = 0; l < g.N3(); ++l)
    s[l] = shear_profile_deriv(p.gamma, g.b(), g.x3(l));
  return s;
}

// binomial coefficients C(r, l)
double binom(int r, int l) {
  double c = 1.0;
  for (int i = 1; i <= l; ++i) c = c * (r - l + i) / i;
  return c;
}

// s composed with Phi3, pointwise on the padded grid
PadVol shear_of_phi3(const PadVol& phi3, const Params& p, double b) {
  PadVol out = phi3;
  for (auto& v : out.v) v = 0.5 * p.gamma * (b * b - v * v);
  return out;
}

}  // namespace

SurfaceField kinematic_rate(const VectorVolumeField& u, const SurfaceField& eta,
                            const Params& params) {
  const Grid& g = eta.grid();
  SurfaceField u1 = trace_surface(u.x), u2 = trace_surface(u.y),
               u3 = trace_surface(u.z);
  SurfaceField e1 = diff(eta, 1), e2 = diff(eta, 2);
  PadSurf pe1 = pad(e1), pe2 = pad(e2), peta = pad(eta);
  PadSurf pu1 = pad(u1), pu2 = pad(u2);
  PadSurf rhs(g);
  const double gb = params.gamma, b = g.b();
  for (size_t i = 0; i < rhs.v.size(); ++i) {
    double s_eta = 0.5 * gb * (b * b - peta.v[i] * peta.v[i]);
    rhs.v[i] = -pu1.v[i] * pe1.v[i] - pu2.v[i] * pe2.v[i] - s_eta * pe1.v[i];
  }
  return u3 + unpad(rhs);
}

VectorVolumeField ForcingBundle::momentum() const {
  VectorVolumeField out = momentum_hat;
  for (int i = 0; i < 3; ++i) axpy(1.0, momentum_tilde.comp(i), out.comp(i));
  return out;
}
VectorSurfaceField ForcingBundle::stress() const {
  VectorSurfaceField out;
  for (int i = 0; i < 3; ++i)
    out[i] = stress_hat[i] + stress_check[i] + stress_tilde[i];
  return out;
}
SurfaceField ForcingBundle::kinematic() const {
  return kinematic_hat + kinematic_tilde;
}

ForcingBundle compute_G(const Snapshot& state, const GeometryCache& cache,
                        const Params& params) {
  const Grid& g = state.u.grid();
  if (!cache.grid.same_as(g))
    throw std::invalid_argument("compute_G: cache/state grid mismatch");
  {
    auto a = cache.eta.spec();
    auto b = state.eta.spec();
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i])
        throw std::invalid_argument(
            "compute_G: cache was not built from state.eta");
  }
  ForcingBundle G;
  G.momentum_hat = VectorVolumeField(g);
  G.momentum_tilde = VectorVolumeField(g);
  G.divergence = VolumeField(g);
  for (int i = 0; i < 3; ++i) {
    G.stress_hat[i] = SurfaceField(g);
    G.stress_check[i] = SurfaceField(g);
    G.stress_tilde[i] = SurfaceField(g);
  }
  G.kinematic_hat = SurfaceField(g);
  G.kinematic_tilde = SurfaceField(g);

  const VectorVolumeField& u = state.u;
  const VolumeField& p = state.p;
  const SurfaceField& eta = state.eta;

  // spectral derivatives of u
  std::array<std::array<VolumeField, 3>, 3> du;  // du[k][j] = d_{k+1} u_j
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) du[k][j] = diff(u.comp(j), k + 1);

  // padded operands shared across terms
  std::array<std::array<PadVol, 3>, 3> Pdu;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) Pdu[k][j] = pad(du[k][j]);
  std::array<PadVol, 3> Pu = {pad(u.x), pad(u.y), pad(u.z)};
  PadVol Pm13 = pad(cache.metric(0, 2)), Pm23 = pad(cache.metric(1, 2)),
         Pm33 = pad(cache.metric(2, 2));
  PadVol Ptr = pad(cache.transport);

  SymTensorVolumeField Da = sym_grad_a(u, cache);   // D_A u
  SymTensorVolumeField T = stress_a(p, u, cache);   // p I - D_A u
  SymTensorVolumeField Dflat = sym_grad(u);

  // ---- G1 hat -------------------------------------------------------------
  // -div(D u - D_A u)
  {
    SymTensorVolumeField Ddiff(g);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j)
        Ddiff.comp(i, j) = Dflat.comp(i, j) - Da.comp(i, j);
    VectorVolumeField t = div_tensor(Ddiff);
    for (int i = 0; i < 3; ++i) axpy(-1.0, t.comp(i), G.momentum_hat.comp(i));
  }
  // -div_{A-I}(T): only the d3 column of (A - I) is nonzero
  for (int i = 0; i < 3; ++i) {
    PadVol d31 = pad(diff(T.comp(i, 0), 3));
    PadVol d32 = pad(diff(T.comp(i, 1), 3));
    PadVol d33 = pad(diff(T.comp(i, 2), 3));
    PadVol one = pad_profile(g, std::vector<double>(g.N3(), 1.0));
    PadVol expr = Pm13 * d31 + Pm23 * d32 + (Pm33 - one) * d33;
    axpy(-1.0, unpad(expr), G.momentum_hat.comp(i));
  }
  // -u . grad_A u + transport d3 u
  for (int i = 0; i < 3; ++i) {
    PadVol adv = Pu[0] * (Pdu[0][i] + Pm13 * Pdu[2][i]) +
                 Pu[1] * (Pdu[1][i] + Pm23 * Pdu[2][i]) +
                 Pu[2] * (Pm33 * Pdu[2][i]);
    PadVol expr = Ptr * Pdu[2][i] - adv;
    axpy(1.0, unpad(expr), G.momentum_hat.comp(i));
  }

  // ---- G1 tilde (gamma terms) ----------------------------------------------
  if (params.gamma != 0.0) {
    PadVol Pphi3 = pad(cache.phi3);
    PadVol sphi = shear_of_phi3(Pphi3, params, g.b());
    PadVol sprof = pad_profile(g, shear_values(params, g));
    PadVol sdiff = sphi - sprof;
    VolumeField sphi_spec = unpad(sphi);
    VolumeField d3sphi = diff(sphi_spec, 3);
    VolumeField d1sphi = diff(sphi_spec, 1);
    VolumeField d2sphi = diff(sphi_spec, 2);
    PadVol Pd3s = pad(d3sphi);

    // -(s(Phi3) - s) d1 u - s(Phi3) (A - I)_{1k} d_k u  [row 1 of A - I is
    // (0, 0, m13)]
    for (int i = 0; i < 3; ++i) {
      PadVol expr = sdiff * Pdu[0][i] + sphi * (Pm13 * Pdu[2][i]);
      axpy(-1.0, unpad(expr), G.momentum_tilde.comp(i));
    }
    // -(u . grad_{A-I}(s Phi3 e1) + u . grad((s Phi3 - s) e1)); e1 component
    {
      PadVol one = pad_profile(g, std::vector<double>(g.N3(), 1.0));
      PadVol sprime = pad_profile(g, shear_deriv_values(params, g));
      PadVol expr = Pu[0] * (Pm13 * Pd3s) + Pu[1] * (Pm23 * Pd3s) +
                    Pu[2] * ((Pm33 - one) * Pd3s) + Pu[0] * pad(d1sphi) +
                    Pu[1] * pad(d2sphi) + Pu[2] * (Pd3s - sprime);
      axpy(-1.0, unpad(expr), G.momentum_tilde.x);
    }
  }

  // ---- G2 -------------------------------------------------------------------
  {
    PadVol one = pad_profile(g, std::vector<double>(g.N3(), 1.0));
    PadVol expr = (one - Pm33) * Pdu[2][2] - Pm13 * Pdu[2][0] -
                  Pm23 * Pdu[2][1];
    G.divergence = unpad(expr);
  }

  // ---- G3 -------------------------------------------------------------------
  SurfaceField de1 = diff(eta, 1), de2 = diff(eta, 2);
  PadSurf pe1 = pad(de1), pe2 = pad(de2), peta = pad(eta);
  {
    // hat: (T_{i1} - eta d_{i1}) d1eta + (T_{i2} - eta d_{i2}) d2eta
    //      - (D u - D_A u)_{i3} at the surface
    for (int i = 0; i < 3; ++i) {
      PadSurf t1 = pad_top(pad(T.comp(i, 0)));
      PadSurf t2 = pad_top(pad(T.comp(i, 1)));
      if (i == 0) t1 -= peta;
      if (i == 1) t2 -= peta;
      PadSurf expr = t1 * pe1 + t2 * pe2;
      SurfaceField corr =
          trace_surface(Dflat.comp(i, 2)) - trace_surface(Da.comp(i, 2));
      G.stress_hat[i] = unpad(expr) - corr;
    }
  }
  if (params.sigma != 0.0) {
    SurfaceField H = mean_curvature(eta);
    SurfaceField lap_eta = diff(eta, 1, 2) + diff(eta, 2, 2);
    PadSurf ph = pad(H);
    G.stress_check[0] = params.sigma * unpad(ph * pe1);
    G.stress_check[1] = params.sigma * unpad(ph * pe2);
    G.stress_check[2] = params.sigma * (lap_eta - H);
  }
  if (params.gamma != 0.0) {
    // gamma eta M (e3 - N) = (0, 0, gamma eta d1 eta)
    G.stress_tilde[2] = params.gamma * unpad(peta * pe1);
  }

  // ---- G4 -------------------------------------------------------------------
  {
    PadSurf pu1 = pad(trace_surface(u.x)), pu2 = pad(trace_surface(u.y));
    G.kinematic_hat = -1.0 * unpad(pu1 * pe1 + pu2 * pe2);
  }
  if (params.gamma != 0.0) {
    // (s(0) - s(eta)) d1 eta = (gamma/2) eta^2 d1 eta
    PadSurf expr = peta * peta * pe1;
    G.kinematic_tilde = 0.5 * params.gamma * unpad(expr);
  }

  return G;
}

// ---------------------------------------------------------------------------

ResidualFields residual_geometric(const Snapshot& state,
                                  const VectorVolumeField& du_dt,
                                  const GeometryCache& cache,
                                  const Params& params) {
  const Grid& g = state.u.grid();
  const VectorVolumeField& u = state.u;
  ResidualFields r;
  r.momentum = VectorVolumeField(g);
  r.divergence = div_a(u, cache);

  std::array<std::array<PadVol, 3>, 3> Pdu;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) Pdu[k][j] = pad(diff(u.comp(j), k + 1));
  std::array<PadVol, 3> Pu = {pad(u.x), pad(u.y), pad(u.z)};
  PadVol Pm13 = pad(cache.metric(0, 2)), Pm23 = pad(cache.metric(1, 2)),
         Pm33 = pad(cache.metric(2, 2));
  PadVol Ptr = pad(cache.transport);
  PadVol Pphi3 = pad(cache.phi3);
  PadVol sphi = shear_of_phi3(Pphi3, params, g.b());

  SymTensorVolumeField T = stress_a(state.p, u, cache);
  VectorVolumeField divT = div_a_tensor(T, cache);

  for (int i = 0; i < 3; ++i) {
    PadVol adv = Pu[0] * (Pdu[0][i] + Pm13 * Pdu[2][i]) +
                 Pu[1] * (Pdu[1][i] + Pm23 * Pdu[2][i]) +
                 Pu[2] * (Pm33 * Pdu[2][i]);
    PadVol expr = adv - Ptr * Pdu[2][i] + sphi * (Pdu[0][i] + Pm13 * Pdu[2][i]);
    if (i == 0) {
      // u . grad_A (U o Phi) = s'(Phi3) u3 e1 = -gamma Phi3 u3 e1
      expr += (-params.gamma) * (Pphi3 * Pu[2]);
    }
    r.momentum.comp(i) = du_dt.comp(i) + unpad(expr) + divT.comp(i);
  }

  // stress rows: T N - [(eta - sigma H) I - gamma eta M] N on Sigma
  SurfaceField H = mean_curvature(state.eta);
  SurfaceField de1 = diff(state.eta, 1), de2 = diff(state.eta, 2);
  PadSurf pe1 = pad(de1), pe2 = pad(de2), peta = pad(state.eta);
  PadSurf ph = pad(H);
  for (int i = 0; i < 3; ++i) {
    PadSurf t1 = pad_top(pad(T.comp(i, 0)));
    PadSurf t2 = pad_top(pad(T.comp(i, 1)));
    PadSurf t3 = pad_top(pad(T.comp(i, 2)));
    PadSurf lhs = (-1.0 * t1) * pe1 + (-1.0 * t2) * pe2 + t3;
    // rhs_i = (eta - sigma H) N_i - gamma eta (M N)_i
    PadSurf gs = peta - params.sigma * ph;
    PadSurf rhs(g);
    if (i == 0) {
      rhs = (-1.0 * gs) * pe1;
      // (M N)_1 = N_3 = 1
      PadSurf me = (-params.gamma) * peta;
      rhs += me;
    } else if (i == 1) {
      rhs = (-1.0 * gs) * pe2;
    } else {
      rhs = gs;
      // (M N)_3 = N_1 = -d1 eta
      rhs += params.gamma * (peta * pe1);
    }
    r.stress[i] = unpad(lhs - rhs);
  }

  // kinematic: deta_dt + s(eta) d1 eta - u . N
  r.kinematic =
      state.deta_dt - kinematic_rate(u, state.eta, params);

  return r;
}

ResidualFields residual_flattened(const Snapshot& state,
                                  const VectorVolumeField& du_dt,
                                  const ForcingBundle& G, const Params& params,
                                  double kinematic_coeff) {
  const Grid& g = state.u.grid();
  const VectorVolumeField& u = state.u;
  ResidualFields r;
  r.momentum = VectorVolumeField(g);

  auto sprof = shear_values(params, g);
  auto sdprof = shear_deriv_values(params, g);
  VectorVolumeField gradp(g);
  gradp.x = diff(state.p, 1);
  gradp.y = diff(state.p, 2);
  gradp.z = diff(state.p, 3);
  VolumeField divu = divergence(u);
  VectorVolumeField Gmom = G.momentum();
  for (int i = 0; i < 3; ++i) {
    VolumeField term = du_dt.comp(i) +
                       scale_by_profile(diff(u.comp(i), 1), sprof) +
                       gradp.comp(i);
    // - (Lap u + grad div u)
    VolumeField visc = diff(u.comp(i), 1, 2) + diff(u.comp(i), 2, 2) +
                       diff(u.comp(i), 3, 2) + diff(divu, i + 1);
    axpy(-1.0, visc, term);
    if (i == 0) axpy(1.0, scale_by_profile(u.z, sdprof), term);
    axpy(-1.0, Gmom.comp(i), term);
    r.momentum.comp(i) = std::move(term);
  }

  r.divergence = divu - G.divergence;

  SurfaceField lap_eta = diff(state.eta, 1, 2) + diff(state.eta, 2, 2);
  VectorSurfaceField Gs = G.stress();
  for (int i = 0; i < 3; ++i) {
    // S(p,u) e3 row i = p delta_{i3} - (d_i u3 + d3 u_i)
    SurfaceField row =
        (i == 2) ? trace_surface(state.p) - 2.0 * trace_surface(diff(u.z, 3))
                 : -1.0 * (trace_surface(diff(u.z, i + 1)) +
                           trace_surface(diff(u.comp(i), 3)));
    // rhs: (eta - sigma lap eta) e3 - gamma eta e1 + G3
    if (i == 0) axpy(params.gamma, state.eta, row);
    if (i == 2) axpy(-1.0, state.eta - params.sigma * lap_eta, row);
    axpy(-1.0, Gs[i], row);
    r.stress[i] = std::move(row);
  }

  r.kinematic = state.deta_dt - trace_surface(u.z) +
                kinematic_coeff * diff(state.eta, 1) - G.kinematic();

  return r;
}

// ---------------------------------------------------------------------------
// commutator forcing F^{i,j}

using detail::time_deriv;

CommutatorForcing compute_F(const History& h, const Params& params, int j,
                            double j_min_floor) {
  const int r = j;
  if (h.size() < r + 1)
    throw std::invalid_argument("compute_F: insufficient history");
  if (!h.uniform(r + 1))
    throw std::invalid_argument("compute_F: non-uniform history spacing");
  const Grid& g = h.newest().u.grid();

  CommutatorForcing F;
  F.order = r;
  F.momentum = VectorVolumeField(g);
  F.divergence = VolumeField(g);
  for (int i = 0; i < 3; ++i) F.stress[i] = SurfaceField(g);
  F.kinematic = SurfaceField(g);
  if (r == 0 && params.sigma == 0.0) return F;

  const int npts = r + 1;
  const int first = h.size() - npts;
  std::vector<double> times(npts);
  for (int m = 0; m < npts; ++m) times[m] = h[first + m].t;

  // per-snapshot quantity stacks
  std::vector<GeometryCache> caches;
  caches.reserve(npts);
  for (int m = 0; m < npts; ++m) {
    const Snapshot& s = h[first + m];
    caches.push_back(build_geometry(s.eta, &s.deta_dt, params, j_min_floor));
  }
  auto stack_vol = [&](auto&& f) {
    std::vector<VolumeField> q;
    q.reserve(npts);
    for (int m = 0; m < npts; ++m) q.push_back(f(m));
    return q;
  };
  auto stack_surf = [&](auto&& f) {
    std::vector<SurfaceField> q;
    q.reserve(npts);
    for (int m = 0; m < npts; ++m) q.push_back(f(m));
    return q;
  };

  std::vector<VolumeField> Qtr = stack_vol([&](int m) { return caches[m].transport; });
  std::vector<VolumeField> Qa13 = stack_vol([&](int m) { return caches[m].metric(0, 2); });
  std::vector<VolumeField> Qa23 = stack_vol([&](int m) { return caches[m].metric(1, 2); });
  std::vector<VolumeField> Qa33 = stack_vol([&](int m) { return caches[m].metric(2, 2); });
  std::vector<VolumeField> Qphi3 = stack_vol([&](int m) { return caches[m].phi3; });
  std::array<std::vector<VolumeField>, 3> Qu;
  std::vector<VolumeField> Qp;
  for (int i = 0; i < 3; ++i)
    Qu[i] = stack_vol([&](int m) { return h[first + m].u.comp(i); });
  Qp = stack_vol([&](int m) { return h[first + m].p; });
  // u_j A_{j3} product per snapshot
  std::vector<VolumeField> QuA3 = stack_vol([&](int m) {
    const Snapshot& s = h[first + m];
    PadVol e = pad(s.u.x) * pad(caches[m].metric(0, 2)) +
               pad(s.u.y) * pad(caches[m].metric(1, 2)) +
               pad(s.u.z) * pad(caches[m].metric(2, 2));
    return unpad(e);
  });
  // s o Phi3 per snapshot
  std::vector<VolumeField> Qsphi = stack_vol([&](int m) {
    return unpad(shear_of_phi3(pad(caches[m].phi3), params, g.b()));
  });
  // D_A u tensor per snapshot
  std::vector<SymTensorVolumeField> QDa;
  QDa.reserve(npts);
  for (int m = 0; m < npts; ++m)
    QDa.push_back(sym_grad_a(h[first + m].u, caches[m]));
  // surface stacks
  std::vector<SurfaceField> Qeta = stack_surf([&](int m) { return h[first + m].eta; });
  std::vector<SurfaceField> Qeta2 = stack_surf([&](int m) {
    return multiply(h[first + m].eta, h[first + m].eta);
  });
  std::vector<SurfaceField> Qcurv = stack_surf([&](int m) {
    const SurfaceField& e = h[first + m].eta;
    SurfaceField lap = diff(e, 1, 2) + diff(e, 2, 2);
    return params.sigma * (lap - mean_curvature(e));
  });

  auto dt_vol = [&](const std::vector<VolumeField>& q, int ell) {
    return time_deriv(q, times, ell);
  };
  auto dt_surf = [&](const std::vector<SurfaceField>& q, int ell) {
    return time_deriv(q, times, ell);
  };

  const GeometryCache& cnow = caches.back();

  // row-1 contraction A_{1k} d_k u_i = d1 u_i + a13 d3 u_i per snapshot
  std::array<std::vector<VolumeField>, 3> Qrow1;
  if (params.gamma != 0.0)
    for (int i = 0; i < 3; ++i)
      Qrow1[i] = stack_vol([&](int m) {
        PadVol e = pad(diff(h[first + m].u.comp(i), 1)) +
                   pad(caches[m].metric(0, 2)) *
                       pad(diff(h[first + m].u.comp(i), 3));
        return unpad(e);
      });
  PadVol Psphi_now = shear_of_phi3(pad(cnow.phi3), params, g.b());

  // inner commutator tensor C_{ik} = sum_{0<l} C_{rl} [dt^l a_{i3} dt^{r-l} d3 u_k
  //                                                  + dt^l a_{k3} dt^{r-l} d3 u_i]
  SymTensorVolumeField innerC(g);

  for (int ell = 1; ell <= r; ++ell) {
    const double C = binom(r, ell);
    // time-differenced coefficient fields at level ell
    VolumeField a13_l = dt_vol(Qa13, ell), a23_l = dt_vol(Qa23, ell),
                a33_l = dt_vol(Qa33, ell);
    VolumeField tr_l = dt_vol(Qtr, ell);
    VolumeField uA3_l = dt_vol(QuA3, ell);
    VolumeField u1_l = dt_vol(Qu[0], ell), u2_l = dt_vol(Qu[1], ell);
    std::array<VolumeField, 3> u_rl;
    for (int i = 0; i < 3; ++i) u_rl[i] = dt_vol(Qu[i], r - ell);
    VolumeField p_rl = dt_vol(Qp, r - ell);
    SurfaceField eta_rl = dt_surf(Qeta, r - ell);
    SurfaceField eta_l = dt_surf(Qeta, ell);
    SurfaceField eta2_l = dt_surf(Qeta2, ell);

    PadVol Pa13 = pad(a13_l), Pa23 = pad(a23_l), Pa33 = pad(a33_l);

    // --- F1 ---
    for (int i = 0; i < 3; ++i) {
      VolumeField d3u = diff(u_rl[i], 3);
      VolumeField d1u = diff(u_rl[i], 1);
      VolumeField d2u = diff(u_rl[i], 2);
      const PadVol& Pai = (i == 0) ? Pa13 : (i == 1) ? Pa23 : Pa33;
      // + dt^l(transport) dt^{r-l} d3 u_i
      // - dt^l(u_j A_{jk}) dt^{r-l} d_k u_i  (k=1: u1, k=2: u2, k=3: u_j a_{j3})
      // - dt^l A_{i3} dt^{r-l} d3 p
      PadVol expr = pad(tr_l) * pad(d3u) - pad(u1_l) * pad(d1u) -
                    pad(u2_l) * pad(d2u) - pad(uA3_l) * pad(d3u) -
                    Pai * pad(diff(p_rl, 3));
      // + dt^l A_{jk} dt^{r-l} d_k (D_A u)_{ij}: only k = 3 varies
      for (int jj = 0; jj < 3; ++jj) {
        std::vector<VolumeField> QD =
            stack_vol([&](int m) { return QDa[m].comp(i, jj); });
        const PadVol& Paj = (jj == 0) ? Pa13 : (jj == 1) ? Pa23 : Pa33;
        expr += Paj * pad(diff(time_deriv(QD, times, r - ell), 3));
      }
      axpy(C, unpad(expr), F.momentum.comp(i));

      // tilde: -[dt^l(s o Phi3) dt^{r-l}(A_{1k} d_k u_i)
      //          + (s o Phi3) dt^l a13 dt^{r-l} d3 u_i
      //          + dt^l(s' o Phi3) dt^{r-l} u3 delta_{i1}]
      if (params.gamma != 0.0) {
        VolumeField sphi_l = dt_vol(Qsphi, ell);
        PadVol texpr = pad(sphi_l) * pad(time_deriv(Qrow1[i], times, r - ell)) +
                       Psphi_now * (Pa13 * pad(d3u));
        if (i == 0) {
          VolumeField phi3_l = dt_vol(Qphi3, ell);
          // s'(Phi3) = -gamma Phi3 is linear in Phi3
          texpr += (-params.gamma) * (pad(phi3_l) * pad(u_rl[2]));
        }
        axpy(-C, unpad(texpr), F.momentum.comp(i));
      }

      // accumulate the inner commutator tensor
      for (int k = 0; k <= i; ++k) {
        const PadVol& Pak = (k == 0) ? Pa13 : (k == 1) ? Pa23 : Pa33;
        PadVol e = Pai * pad(diff(u_rl[k], 3)) + Pak * pad(d3u);
        axpy(C, unpad(e), innerC.comp(i, k));
      }
    }

    // --- F2 ---
    {
      PadVol e = Pa13 * pad(diff(u_rl[0], 3)) + Pa23 * pad(diff(u_rl[1], 3)) +
                 Pa33 * pad(diff(u_rl[2], 3));
      axpy(-C, unpad(e), F.divergence);
    }

    // --- F3 hat ---
    {
      SurfaceField n1_l = -1.0 * diff(eta_l, 1);
      SurfaceField n2_l = -1.0 * diff(eta_l, 2);
      PadSurf pn1 = pad(n1_l), pn2 = pad(n2_l);
      SurfaceField ep = eta_rl - trace_surface(p_rl);
      PadSurf pep = pad(ep);
      for (int i = 0; i < 3; ++i) {
        std::vector<VolumeField> QD1 = stack_vol([&](int m) { return QDa[m].comp(i, 0); });
        std::vector<VolumeField> QD2 = stack_vol([&](int m) { return QDa[m].comp(i, 1); });
        PadSurf D1 = pad(trace_surface(time_deriv(QD1, times, r - ell)));
        PadSurf D2 = pad(trace_surface(time_deriv(QD2, times, r - ell)));
        PadSurf expr = D1 * pn1 + D2 * pn2;
        if (i == 0) expr += pep * pn1;
        if (i == 1) expr += pep * pn2;
        axpy(C, unpad(expr), F.stress[i]);
      }
      // tilde, first sum: -C [sigma dt^{r-l} lap eta dt^l N_i
      //                      + gamma dt^{r-l} eta (M dt^l N)_i]
      SurfaceField lap_rl = diff(eta_rl, 1, 2) + diff(eta_rl, 2, 2);
      PadSurf plap = pad(lap_rl), petarl = pad(eta_rl);
      if (params.sigma != 0.0) {
        axpy(-C * params.sigma, unpad(plap * pn1), F.stress[0]);
        axpy(-C * params.sigma, unpad(plap * pn2), F.stress[1]);
      }
      if (params.gamma != 0.0) {
        // M dt^l N = (0, 0, dt^l N_1)
        axpy(-C * params.gamma, unpad(petarl * pn1), F.stress[2]);
      }
      // tilde, second sum handled below over 0 <= l <= r
      // --- F4 ---
      PadSurf pu1 = pad(trace_surface(u_rl[0]));
      PadSurf pu2 = pad(trace_surface(u_rl[1]));
      PadSurf expr4 = pu1 * pn1 + pu2 * pn2;
      axpy(C, unpad(expr4), F.kinematic);
      if (params.gamma != 0.0) {
        PadSurf d1eta_rl = pad(diff(eta_rl, 1));
        axpy(0.5 * params.gamma * C, unpad(pad(eta2_l) * d1eta_rl),
             F.kinematic);
      }
    }
  }

  // F1: + div_A(innerC); F3 hat: + innerC N_j at the surface (current metric
  // and normal)
  if (r > 0) {
    VectorVolumeField dc = div_a_tensor(innerC, cnow);
    for (int i = 0; i < 3; ++i) axpy(1.0, dc.comp(i), F.momentum.comp(i));
    PadSurf pn1 = pad(cnow.normal[0]), pn2 = pad(cnow.normal[1]);
    for (int i = 0; i < 3; ++i) {
      PadSurf e = pad_top(pad(innerC.comp(i, 0))) * pn1 +
                  pad_top(pad(innerC.comp(i, 1))) * pn2;
      SurfaceField t = unpad(e) + trace_surface(innerC.comp(i, 2));  // N_3 = 1
      axpy(1.0, t, F.stress[i]);
    }
  }

  // F3 tilde second sum: + sum_{0<=l<=r} C_{rl} dt^l (sigma(lap eta - H(eta)))
  //                        dt^{r-l} N_i
  if (params.sigma != 0.0) {
    for (int ell = 0; ell <= r; ++ell) {
      const double C = binom(r, ell);
      SurfaceField curv_l = dt_surf(Qcurv, ell);
      if (r - ell == 0) {
        PadSurf pc = pad(curv_l);
        axpy(C, unpad(pc * pad(cnow.normal[0])), F.stress[0]);
        axpy(C, unpad(pc * pad(cnow.normal[1])), F.stress[1]);
        axpy(C, curv_l, F.stress[2]);  // N_3 = 1
      } else {
        SurfaceField eta_rl = dt_surf(Qeta, r - ell);
        PadSurf pc = pad(curv_l);
        axpy(-C, unpad(pc * pad(diff(eta_rl, 1))), F.stress[0]);
        axpy(-C, unpad(pc * pad(diff(eta_rl, 2))), F.stress[1]);
        // dt^{r-l} N_3 = 0 for r-l > 0
      }
    }
  }

  return F;
}

}  // namespace shearflow
