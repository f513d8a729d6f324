#include "shearflow/geometry.hpp"

#include <cmath>

namespace shearflow {

VolumeField poisson_extend_dz(const SurfaceField& eta, int order) {
  const Grid& g = eta.grid();
  VolumeField out(g);
  auto in = eta.spec();
  auto o = out.spec_mut();
  const int K1 = g.K1(), N2 = g.N2(), N3 = g.N3();
  for (int l = 0; l < N3; ++l) {
    const double z = g.x3(l);
    for (int k2 = 0; k2 < N2; ++k2)
      for (int k1 = 0; k1 < K1; ++k1) {
        const double xa = g.xi_abs(k1, k2);
        double m = std::exp(xa * z);
        for (int q = 0; q < order; ++q) m *= xa;
        o[((size_t)l * N2 + k2) * K1 + k1] = m * in[(size_t)k2 * K1 + k1];
      }
  }
  return out;
}

VolumeField poisson_extend(const SurfaceField& eta) {
  return poisson_extend_dz(eta, 0);
}

namespace {

// per-level scale of a spectral volume field by profile values
VolumeField level_scale(const VolumeField& f, const std::vector<double>& prof) {
  return scale_by_profile(f, prof);
}

}  // namespace

const VolumeField& GeometryCache::metric(int i, int j) const {
  return metric_[i][j];
}
const VolumeField& GeometryCache::metric_m_id(int i, int j) const {
  return metric_m_id_[i][j];
}

GeometryCache build_geometry(const SurfaceField& eta,
                             const SurfaceField* deta_dt, const Params& params,
                             double j_min_floor) {
  params.validate();
  const Grid& g = eta.grid();
  GeometryCache c;
  c.grid = g;
  c.eta = eta;
  c.deta_dt = deta_dt ? *deta_dt : SurfaceField(g);

  c.ramp.resize(g.N3());
  for (int l = 0; l < g.N3(); ++l) c.ramp[l] = 1.0 + g.x3(l) / g.b();

  c.eta_ext = poisson_extend(eta);
  c.deta_ext_dt = poisson_extend(c.deta_dt);

  VolumeField dz_eta = poisson_extend_dz(eta, 1);
  VolumeField dz_deta = poisson_extend_dz(c.deta_dt, 1);

  c.dshift_dx1 = level_scale(diff(c.eta_ext, 1), c.ramp);
  c.dshift_dx2 = level_scale(diff(c.eta_ext, 2), c.ramp);

  // J = 1 + eta_ext/b + ramp * d3 eta_ext   (all per-level linear ops, exact)
  c.jacobian = VolumeField(g);
  {
    auto o = c.jacobian.spec_mut();
    auto e = c.eta_ext.spec();
    auto dz = dz_eta.spec();
    const size_t plane = (size_t)g.K1() * g.N2();
    for (int l = 0; l < g.N3(); ++l) {
      for (size_t i = 0; i < plane; ++i) {
        size_t idx = (size_t)l * plane + i;
        o[idx] = e[idx] / g.b() + c.ramp[l] * dz[idx];
      }
      o[(size_t)l * plane] += 1.0;  // the constant 1
    }
  }

  c.djacobian_dt = VolumeField(g);
  {
    auto o = c.djacobian_dt.spec_mut();
    auto e = c.deta_ext_dt.spec();
    auto dz = dz_deta.spec();
    const size_t plane = (size_t)g.K1() * g.N2();
    for (int l = 0; l < g.N3(); ++l)
      for (size_t i = 0; i < plane; ++i) {
        size_t idx = (size_t)l * plane + i;
        o[idx] = e[idx] / g.b() + c.ramp[l] * dz[idx];
      }
  }

  // K = 1/J pointwise; guard the collapse floor
  c.inv_jacobian = VolumeField(g);
  {
    auto jp = c.jacobian.phys();
    auto kp = c.inv_jacobian.phys_mut();
    double jmin = jp[0];
    for (double v : jp) jmin = std::min(jmin, v);
    c.j_min_found = jmin;
    if (jmin < j_min_floor) throw DomainCollapse(jmin, j_min_floor);
    for (size_t i = 0; i < kp.size(); ++i) kp[i] = 1.0 / jp[i];
  }

  // phi3 = x3 + eta_ext * ramp
  c.phi3 = level_scale(c.eta_ext, c.ramp);
  {
    auto o = c.phi3.spec_mut();
    const size_t plane = (size_t)g.K1() * g.N2();
    for (int l = 0; l < g.N3(); ++l) o[(size_t)l * plane] += g.x3(l);
  }

  // transport coefficient deta_ext_dt * ramp * K (pointwise)
  {
    VolumeField tr = level_scale(c.deta_ext_dt, c.ramp);
    c.transport = VolumeField(g);
    auto tp = tr.phys();
    auto kp = c.inv_jacobian.phys();
    auto o = c.transport.phys_mut();
    for (size_t i = 0; i < o.size(); ++i) o[i] = tp[i] * kp[i];
  }

  c.normal[0] = -1.0 * diff(eta, 1);
  c.normal[1] = -1.0 * diff(eta, 2);
  c.normal[2] = SurfaceField(g);
  c.normal[2].spec_mut()[0] = 1.0;

  // metric matrix: rows (1,0,-A K), (0,1,-B K), (0,0,K); pointwise products
  auto pointwise_negprod = [&](const VolumeField& a) {
    VolumeField out(g);
    auto ap = a.phys();
    auto kp = c.inv_jacobian.phys();
    auto o = out.phys_mut();
    for (size_t i = 0; i < o.size(); ++i) o[i] = -ap[i] * kp[i];
    return out;
  };
  VolumeField zero(g);
  VolumeField one(g);
  {
    auto s = one.spec_mut();
    const size_t plane = (size_t)g.K1() * g.N2();
    for (int l = 0; l < g.N3(); ++l) s[(size_t)l * plane] = 1.0;
  }
  c.metric_[0][0] = one;
  c.metric_[0][1] = zero;
  c.metric_[0][2] = pointwise_negprod(c.dshift_dx1);
  c.metric_[1][0] = zero;
  c.metric_[1][1] = one;
  c.metric_[1][2] = pointwise_negprod(c.dshift_dx2);
  c.metric_[2][0] = zero;
  c.metric_[2][1] = zero;
  c.metric_[2][2] = c.inv_jacobian;

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      c.metric_m_id_[i][j] = c.metric_[i][j];
      if (i == j) {
        auto s = c.metric_m_id_[i][j].spec_mut();
        const size_t plane = (size_t)g.K1() * g.N2();
        for (int l = 0; l < g.N3(); ++l) s[(size_t)l * plane] -= 1.0;
      }
    }

  return c;
}

VectorVolumeField grad_a(const VolumeField& f, const GeometryCache& c) {
  const Grid& g = f.grid();
  VolumeField d1 = diff(f, 1), d2 = diff(f, 2), d3 = diff(f, 3);
  PadVol p1 = pad(d1), p2 = pad(d2), p3 = pad(d3);
  PadVol m13 = pad(c.metric(0, 2)), m23 = pad(c.metric(1, 2)),
         m33 = pad(c.metric(2, 2));
  VectorVolumeField out(g);
  out.x = unpad(p1 + m13 * p3);
  out.y = unpad(p2 + m23 * p3);
  out.z = unpad(m33 * p3);
  return out;
}

VolumeField div_a(const VectorVolumeField& X, const GeometryCache& c) {
  // A_ij d_j X_i with the sparse metric rows
  PadVol d1x = pad(diff(X.x, 1)), d2y = pad(diff(X.y, 2));
  PadVol d3x = pad(diff(X.x, 3)), d3y = pad(diff(X.y, 3)),
         d3z = pad(diff(X.z, 3));
  PadVol m13 = pad(c.metric(0, 2)), m23 = pad(c.metric(1, 2)),
         m33 = pad(c.metric(2, 2));
  return unpad(d1x + d2y + m13 * d3x + m23 * d3y + m33 * d3z);
}

SymTensorVolumeField sym_grad_a(const VectorVolumeField& u,
                                const GeometryCache& c) {
  const Grid& g = u.grid();
  // (D_A u)_{ij} = A_{ik} d_k u_j + A_{jk} d_k u_i
  std::array<std::array<PadVol, 3>, 3> du;  // du[k][j] = d_k u_j
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) du[k][j] = pad(diff(u.comp(j), k + 1));
  PadVol m13 = pad(c.metric(0, 2)), m23 = pad(c.metric(1, 2)),
         m33 = pad(c.metric(2, 2));
  // rows of the metric acting on d_k f: row0 = d1 + m13 d3, row1 = d2 + m23 d3,
  // row2 = m33 d3
  auto row = [&](int i, int j) -> PadVol {
    switch (i) {
      case 0: return du[0][j] + m13 * du[2][j];
      case 1: return du[1][j] + m23 * du[2][j];
      default: return m33 * du[2][j];
    }
  };
  SymTensorVolumeField out(g);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) out.comp(i, j) = unpad(row(i, j) + row(j, i));
  return out;
}

SymTensorVolumeField stress_a(const VolumeField& p, const VectorVolumeField& u,
                              const GeometryCache& c) {
  SymTensorVolumeField out = sym_grad_a(u, c);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      VolumeField t = -1.0 * out.comp(i, j);
      if (i == j) axpy(1.0, p, t);
      out.comp(i, j) = std::move(t);
    }
  return out;
}

VectorVolumeField div_a_tensor(const SymTensorVolumeField& T,
                               const GeometryCache& c) {
  const Grid& g = T.grid();
  PadVol m13 = pad(c.metric(0, 2)), m23 = pad(c.metric(1, 2)),
         m33 = pad(c.metric(2, 2));
  VectorVolumeField out(g);
  for (int i = 0; i < 3; ++i) {
    // (div_A T)_i = A_{jk} d_k T_{ij}
    PadVol d1 = pad(diff(T.comp(i, 0), 1));
    PadVol d2 = pad(diff(T.comp(i, 1), 2));
    PadVol d31 = pad(diff(T.comp(i, 0), 3));
    PadVol d32 = pad(diff(T.comp(i, 1), 3));
    PadVol d33 = pad(diff(T.comp(i, 2), 3));
    out.comp(i) = unpad(d1 + d2 + m13 * d31 + m23 * d32 + m33 * d33);
  }
  return out;
}

SymTensorVolumeField sym_grad(const VectorVolumeField& u) {
  const Grid& g = u.grid();
  SymTensorVolumeField out(g);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      out.comp(i, j) = diff(u.comp(j), i + 1) + diff(u.comp(i), j + 1);
  return out;
}

SymTensorVolumeField stress(const VolumeField& p, const VectorVolumeField& u) {
  SymTensorVolumeField out = sym_grad(u);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      VolumeField t = -1.0 * out.comp(i, j);
      if (i == j) axpy(1.0, p, t);
      out.comp(i, j) = std::move(t);
    }
  return out;
}

VectorVolumeField div_tensor(const SymTensorVolumeField& T) {
  VectorVolumeField out(T.grid());
  for (int i = 0; i < 3; ++i)
    out.comp(i) = diff(T.comp(i, 0), 1) + diff(T.comp(i, 1), 2) +
                  diff(T.comp(i, 2), 3);
  return out;
}

VolumeField divergence(const VectorVolumeField& u) {
  return diff(u.x, 1) + diff(u.y, 2) + diff(u.z, 3);
}

SurfaceField mean_curvature(const SurfaceField& eta) {
  const Grid& g = eta.grid();
  SurfaceField d1 = diff(eta, 1), d2 = diff(eta, 2);
  PadSurf p1 = pad(d1), p2 = pad(d2);
  PadSurf q1(g), q2(g);
  for (size_t i = 0; i < p1.v.size(); ++i) {
    double s = 1.0 / std::sqrt(1.0 + p1.v[i] * p1.v[i] + p2.v[i] * p2.v[i]);
    q1.v[i] = p1.v[i] * s;
    q2.v[i] = p2.v[i] * s;
  }
  return diff(unpad(q1), 1) + diff(unpad(q2), 2);
}

}  // namespace shearflow
