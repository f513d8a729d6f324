#include "shearflow/ops.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "shearflow/fft.hpp"

namespace shearflow {

namespace {

void check_axis_order(const Grid& g, int axis, int order, bool volume) {
  if (axis < 1 || axis > (volume ? 3 : 2))
    throw std::invalid_argument("diff: invalid axis for this field type");
  if (order < 1 || order > g.max_order())
    throw std::invalid_argument("diff: order out of range");
}

// multiplier (i xi)^order; odd orders zero the Nyquist mode
cplx horiz_multiplier(double xi, int order, bool nyq) {
  if (nyq && (order % 2)) return 0.0;
  switch (order % 4) {  // i^order cycle, kept exactly real or imaginary
    case 0: return cplx(std::pow(xi, order), 0.0);
    case 1: return cplx(0.0, std::pow(xi, order));
    case 2: return cplx(-std::pow(xi, order), 0.0);
    default: return cplx(0.0, -std::pow(xi, order));
  }
}

}  // namespace

SurfaceField diff(const SurfaceField& f, int axis, int order) {
  const Grid& g = f.grid();
  check_axis_order(g, axis, order, false);
  SurfaceField out(g);
  auto in = f.spec();
  auto o = out.spec_mut();
  const int K1 = g.K1(), N2 = g.N2();
  for (int k2 = 0; k2 < N2; ++k2)
    for (int k1 = 0; k1 < K1; ++k1) {
      double xi = (axis == 1) ? g.xi1(k1) : g.xi2(k2);
      bool nyq = (axis == 1) ? g.nyquist1(k1) : g.nyquist2(k2);
      o[(size_t)k2 * K1 + k1] =
          in[(size_t)k2 * K1 + k1] * horiz_multiplier(xi, order, nyq);
    }
  return out;
}

VolumeField diff(const VolumeField& f, int axis, int order) {
  const Grid& g = f.grid();
  check_axis_order(g, axis, order, true);
  VolumeField out(g);
  auto in = f.spec();
  auto o = out.spec_mut();
  const int K1 = g.K1(), N2 = g.N2(), N3 = g.N3();
  const size_t plane = (size_t)K1 * N2;
  if (axis == 3) {
    const Eigen::MatrixXd& D = g.dmat(order);
    for (int l = 0; l < N3; ++l) {
      cplx* op = o.data() + (size_t)l * plane;
      std::fill(op, op + plane, cplx(0.0));
      for (int m = 0; m < N3; ++m) {
        const double d = D(l, m);
        if (d == 0.0) continue;
        const cplx* ip = in.data() + (size_t)m * plane;
        for (size_t i = 0; i < plane; ++i) op[i] += d * ip[i];
      }
    }
  } else {
    for (int l = 0; l < N3; ++l)
      for (int k2 = 0; k2 < N2; ++k2)
        for (int k1 = 0; k1 < K1; ++k1) {
          double xi = (axis == 1) ? g.xi1(k1) : g.xi2(k2);
          bool nyq = (axis == 1) ? g.nyquist1(k1) : g.nyquist2(k2);
          size_t idx = (size_t)l * plane + (size_t)k2 * K1 + k1;
          o[idx] = in[idx] * horiz_multiplier(xi, order, nyq);
        }
  }
  return out;
}

SurfaceField trace_surface(const VolumeField& f) {
  const Grid& g = f.grid();
  SurfaceField out(g);
  auto in = f.spec();
  auto o = out.spec_mut();
  const size_t plane = (size_t)g.K1() * g.N2();
  std::copy(in.begin() + (size_t)(g.N3() - 1) * plane,
            in.begin() + (size_t)g.N3() * plane, o.begin());
  return out;
}

SurfaceField trace_bottom(const VolumeField& f) {
  const Grid& g = f.grid();
  SurfaceField out(g);
  auto in = f.spec();
  auto o = out.spec_mut();
  const size_t plane = (size_t)g.K1() * g.N2();
  std::copy(in.begin(), in.begin() + plane, o.begin());
  return out;
}

VolumeField extend_constant(const SurfaceField& f) {
  const Grid& g = f.grid();
  VolumeField out(g);
  auto in = f.spec();
  auto o = out.spec_mut();
  const size_t plane = (size_t)g.K1() * g.N2();
  for (int l = 0; l < g.N3(); ++l)
    std::copy(in.begin(), in.end(), o.begin() + (size_t)l * plane);
  return out;
}

double integral_surface(const SurfaceField& f) {
  return f.c(0, 0).real() * f.grid().area();
}

double integral_volume(const VolumeField& f) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (int l = 0; l < g.N3(); ++l) s += g.w3()[l] * f.c(0, 0, l).real();
  return s * g.area();
}

double sup_norm(const SurfaceField& f) {
  double m = 0.0;
  for (double v : f.phys()) m = std::max(m, std::abs(v));
  return m;
}
double sup_norm(const VolumeField& f) {
  double m = 0.0;
  for (double v : f.phys()) m = std::max(m, std::abs(v));
  return m;
}

double l2_surface(const SurfaceField& f) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (double v : f.phys()) s += v * v;
  return std::sqrt(s * g.horiz_weight());
}

double l2_volume(const VolumeField& f) {
  const Grid& g = f.grid();
  auto ph = f.phys();
  const size_t plane = (size_t)g.N1() * g.N2();
  double s = 0.0;
  for (int l = 0; l < g.N3(); ++l) {
    double sl = 0.0;
    for (size_t i = 0; i < plane; ++i) {
      double v = ph[(size_t)l * plane + i];
      sl += v * v;
    }
    s += g.w3()[l] * sl;
  }
  return std::sqrt(s * g.horiz_weight());
}

double sobolev_norm_surface(const SurfaceField& f, double s) {
  const Grid& g = f.grid();
  auto sp = f.spec();
  const int K1 = g.K1(), N2 = g.N2();
  double acc = 0.0;
  for (int k2 = 0; k2 < N2; ++k2)
    for (int k1 = 0; k1 < K1; ++k1) {
      double w = g.hermitian_weight(k1);
      double mult = std::pow(1.0 + g.xi_sq(k1, k2), s);
      acc += w * mult * std::norm(sp[(size_t)k2 * K1 + k1]);
    }
  return std::sqrt(acc * g.area());
}

namespace {

// squared L2(Omega) norm from the spectral representation
double l2sq_spec(const VolumeField& f) {
  const Grid& g = f.grid();
  auto sp = f.spec();
  const int K1 = g.K1(), N2 = g.N2(), N3 = g.N3();
  double acc = 0.0;
  for (int l = 0; l < N3; ++l) {
    double sl = 0.0;
    for (int k2 = 0; k2 < N2; ++k2)
      for (int k1 = 0; k1 < K1; ++k1)
        sl += g.hermitian_weight(k1) *
              std::norm(sp[((size_t)l * N2 + k2) * K1 + k1]);
    acc += g.w3()[l] * sl;
  }
  return acc * g.area();
}

}  // namespace

double sobolev_norm_volume(const VolumeField& f, int k) {
  const Grid& g = f.grid();
  if (k < 0) throw std::invalid_argument("sobolev_norm_volume: k >= 0");
  if (k > g.max_order())
    throw std::invalid_argument("sobolev_norm_volume: k exceeds max order");
  double acc = 0.0;
  for (int a3 = 0; a3 <= k; ++a3) {
    VolumeField fz = (a3 == 0) ? f : diff(f, 3, a3);
    for (int a1 = 0; a1 + a3 <= k; ++a1) {
      VolumeField fx = (a1 == 0) ? fz : diff(fz, 1, a1);
      for (int a2 = 0; a1 + a2 + a3 <= k; ++a2) {
        VolumeField fy = (a2 == 0) ? fx : diff(fx, 2, a2);
        acc += l2sq_spec(fy);
      }
    }
  }
  return std::sqrt(acc);
}

namespace {

template <class F>
F lincomb(const F& a, const F& b, double ca, double cb) {
  F out(a.grid());
  auto sa = a.spec();
  auto sb = b.spec();
  auto o = out.spec_mut();
  for (size_t i = 0; i < o.size(); ++i) o[i] = ca * sa[i] + cb * sb[i];
  return out;
}

}  // namespace

SurfaceField operator+(const SurfaceField& a, const SurfaceField& b) {
  return lincomb(a, b, 1.0, 1.0);
}
SurfaceField operator-(const SurfaceField& a, const SurfaceField& b) {
  return lincomb(a, b, 1.0, -1.0);
}
SurfaceField operator*(double a, const SurfaceField& b) {
  SurfaceField out(b.grid());
  auto sb = b.spec();
  auto o = out.spec_mut();
  for (size_t i = 0; i < o.size(); ++i) o[i] = a * sb[i];
  return out;
}
VolumeField operator+(const VolumeField& a, const VolumeField& b) {
  return lincomb(a, b, 1.0, 1.0);
}
VolumeField operator-(const VolumeField& a, const VolumeField& b) {
  return lincomb(a, b, 1.0, -1.0);
}
VolumeField operator*(double a, const VolumeField& b) {
  VolumeField out(b.grid());
  auto sb = b.spec();
  auto o = out.spec_mut();
  for (size_t i = 0; i < o.size(); ++i) o[i] = a * sb[i];
  return out;
}
void axpy(double a, const SurfaceField& x, SurfaceField& y) {
  auto sx = x.spec();
  auto sy = y.spec_mut();
  for (size_t i = 0; i < sy.size(); ++i) sy[i] += a * sx[i];
}
void axpy(double a, const VolumeField& x, VolumeField& y) {
  auto sx = x.spec();
  auto sy = y.spec_mut();
  for (size_t i = 0; i < sy.size(); ++i) sy[i] += a * sx[i];
}

// ---------------------------------------------------------------------------
// dealiased products via 3/2-padded physical grids

namespace {

// copy base half-spectrum plane into padded half-spectrum plane (zero fill);
// Nyquist rows/columns are dropped
void pad_plane(const Grid& g, const cplx* in, cplx* out) {
  const int K1 = g.K1(), N2 = g.N2(), K1p = g.K1p(), M2 = g.M2();
  std::fill(out, out + (size_t)K1p * M2, cplx(0.0));
  for (int k2 = 0; k2 < N2; ++k2) {
    if (g.nyquist2(k2)) continue;
    int m2 = (k2 <= N2 / 2) ? k2 : k2 - N2;
    int k2p = (m2 >= 0) ? m2 : M2 + m2;
    for (int k1 = 0; k1 < K1; ++k1) {
      if (g.nyquist1(k1)) continue;
      out[(size_t)k2p * K1p + k1] = in[(size_t)k2 * K1 + k1];
    }
  }
}

void unpad_plane(const Grid& g, const cplx* in, cplx* out) {
  const int K1 = g.K1(), N2 = g.N2(), K1p = g.K1p(), M2 = g.M2();
  std::fill(out, out + (size_t)K1 * N2, cplx(0.0));
  for (int k2 = 0; k2 < N2; ++k2) {
    if (g.nyquist2(k2)) continue;
    int m2 = (k2 <= N2 / 2) ? k2 : k2 - N2;
    int k2p = (m2 >= 0) ? m2 : M2 + m2;
    for (int k1 = 0; k1 < K1; ++k1) {
      if (g.nyquist1(k1)) continue;
      out[(size_t)k2 * K1 + k1] = in[(size_t)k2p * K1p + k1];
    }
  }
}

}  // namespace

PadSurf::PadSurf(const Grid& g_) : g(g_), v((size_t)g_.M1() * g_.M2(), 0.0) {}
PadVol::PadVol(const Grid& g_)
    : g(g_), v((size_t)g_.M1() * g_.M2() * g_.N3(), 0.0) {}

#define SF_ELEMWISE(T, OP)                        \
  T& T::operator OP##=(const T& o) {              \
    for (size_t i = 0; i < v.size(); ++i) v[i] OP##= o.v[i]; \
    return *this;                                 \
  }
SF_ELEMWISE(PadSurf, +)
SF_ELEMWISE(PadSurf, -)
SF_ELEMWISE(PadSurf, *)
SF_ELEMWISE(PadVol, +)
SF_ELEMWISE(PadVol, -)
SF_ELEMWISE(PadVol, *)
#undef SF_ELEMWISE

PadSurf& PadSurf::operator*=(double a) {
  for (auto& x : v) x *= a;
  return *this;
}
PadVol& PadVol::operator*=(double a) {
  for (auto& x : v) x *= a;
  return *this;
}

PadSurf operator+(PadSurf a, const PadSurf& b) { return a += b; }
PadSurf operator-(PadSurf a, const PadSurf& b) { return a -= b; }
PadSurf operator*(PadSurf a, const PadSurf& b) { return a *= b; }
PadSurf operator*(double a, PadSurf b) { return b *= a; }
PadVol operator+(PadVol a, const PadVol& b) { return a += b; }
PadVol operator-(PadVol a, const PadVol& b) { return a -= b; }
PadVol operator*(PadVol a, const PadVol& b) { return a *= b; }
PadVol operator*(double a, PadVol b) { return b *= a; }

PadSurf pad(const SurfaceField& f) {
  const Grid& g = f.grid();
  PadSurf out(g);
  std::vector<cplx> sp((size_t)g.K1p() * g.M2());
  pad_plane(g, f.spec().data(), sp.data());
  g.fft().surf_bwd_pad(sp.data(), out.v.data());
  return out;
}

PadVol pad(const VolumeField& f) {
  const Grid& g = f.grid();
  PadVol out(g);
  std::vector<cplx> sp((size_t)g.K1p() * g.M2() * g.N3());
  auto in = f.spec();
  const size_t bplane = (size_t)g.K1() * g.N2();
  const size_t pplane = (size_t)g.K1p() * g.M2();
  for (int l = 0; l < g.N3(); ++l)
    pad_plane(g, in.data() + (size_t)l * bplane, sp.data() + (size_t)l * pplane);
  g.fft().vol_bwd_pad(sp.data(), out.v.data());
  return out;
}

SurfaceField unpad(const PadSurf& p) {
  const Grid& g = p.g;
  SurfaceField out(g);
  std::vector<cplx> sp((size_t)g.K1p() * g.M2());
  g.fft().surf_fwd_pad(p.v.data(), sp.data());
  unpad_plane(g, sp.data(), out.spec_mut().data());
  return out;
}

VolumeField unpad(const PadVol& p) {
  const Grid& g = p.g;
  VolumeField out(g);
  std::vector<cplx> sp((size_t)g.K1p() * g.M2() * g.N3());
  g.fft().vol_fwd_pad(p.v.data(), sp.data());
  auto o = out.spec_mut();
  const size_t bplane = (size_t)g.K1() * g.N2();
  const size_t pplane = (size_t)g.K1p() * g.M2();
  for (int l = 0; l < g.N3(); ++l)
    unpad_plane(g, sp.data() + (size_t)l * pplane, o.data() + (size_t)l * bplane);
  return out;
}

PadVol pad_profile(const Grid& g, const std::vector<double>& profile) {
  assert((int)profile.size() == g.N3());
  PadVol out(g);
  const size_t plane = (size_t)g.M1() * g.M2();
  for (int l = 0; l < g.N3(); ++l)
    std::fill(out.v.begin() + (size_t)l * plane,
              out.v.begin() + (size_t)(l + 1) * plane, profile[l]);
  return out;
}

PadSurf pad_top(const PadVol& p) {
  PadSurf out(p.g);
  const size_t plane = (size_t)p.g.M1() * p.g.M2();
  std::copy(p.v.begin() + (size_t)(p.g.N3() - 1) * plane,
            p.v.begin() + (size_t)p.g.N3() * plane, out.v.begin());
  return out;
}

SurfaceField multiply(const SurfaceField& a, const SurfaceField& b) {
  return unpad(pad(a) * pad(b));
}

VolumeField multiply(const VolumeField& a, const VolumeField& b) {
  return unpad(pad(a) * pad(b));
}

VolumeField scale_by_profile(const VolumeField& f,
                             const std::vector<double>& profile) {
  const Grid& g = f.grid();
  assert((int)profile.size() == g.N3());
  VolumeField out(g);
  auto in = f.spec();
  auto o = out.spec_mut();
  const size_t plane = (size_t)g.K1() * g.N2();
  for (int l = 0; l < g.N3(); ++l)
    for (size_t i = 0; i < plane; ++i)
      o[(size_t)l * plane + i] = profile[l] * in[(size_t)l * plane + i];
  return out;
}

}  // namespace shearflow
