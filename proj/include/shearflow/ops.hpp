#pragma once

#include <vector>

#include "shearflow/field.hpp"

namespace shearflow {

/// Spectral derivative: Fourier multiplier (i xi)^order along axes 1, 2,
/// Chebyshev differentiation along axis 3 (volume fields only).  Odd-order
/// horizontal derivatives zero the Nyquist mode.  order must be >= 1 and at
/// most grid.max_order().
SurfaceField diff(const SurfaceField& f, int axis, int order = 1);
VolumeField diff(const VolumeField& f, int axis, int order = 1);

SurfaceField trace_surface(const VolumeField& f);  // restriction to x3 = 0
SurfaceField trace_bottom(const VolumeField& f);   // restriction to x3 = -b
VolumeField extend_constant(const SurfaceField& f);

double integral_surface(const SurfaceField& f);
double integral_volume(const VolumeField& f);
double sup_norm(const SurfaceField& f);
double sup_norm(const VolumeField& f);
double l2_surface(const SurfaceField& f);  // quadrature L2 norm
double l2_volume(const VolumeField& f);

/// || f ||_{H^s(Sigma)} via the Fourier multiplier
/// (sum_n (1+|xi(n)|^2)^s |fhat(n)|^2 L1 L2)^{1/2}; any real s.
double sobolev_norm_surface(const SurfaceField& f, double s);

/// Integer-order || f ||_{H^k(Omega)}: all spatial multi-indices |a| <= k,
/// spectral derivatives, tensor trapezoid x Clenshaw-Curtis quadrature.
double sobolev_norm_volume(const VolumeField& f, int k);

// field arithmetic (same-grid, representation-preserving where possible)
SurfaceField operator+(const SurfaceField& a, const SurfaceField& b);
SurfaceField operator-(const SurfaceField& a, const SurfaceField& b);
SurfaceField operator*(double a, const SurfaceField& b);
VolumeField operator+(const VolumeField& a, const VolumeField& b);
VolumeField operator-(const VolumeField& a, const VolumeField& b);
VolumeField operator*(double a, const VolumeField& b);
void axpy(double a, const SurfaceField& x, SurfaceField& y);  // y += a x
void axpy(double a, const VolumeField& x, VolumeField& y);

/// Dealiased pointwise product (3/2-rule padded horizontally, nodal
/// vertically).  Result is spectral with Nyquist modes zeroed.
SurfaceField multiply(const SurfaceField& a, const SurfaceField& b);
VolumeField multiply(const VolumeField& a, const VolumeField& b);

/// Scale a volume field by a function of x3 alone (exact, per-level).
VolumeField scale_by_profile(const VolumeField& f,
                             const std::vector<double>& profile);

/// Padded physical workspaces for assembling general dealiased pointwise
/// expressions.  pad() interpolates a field onto the 3/2-dense horizontal
/// grid; unpad() projects back onto retained modes (Nyquist zeroed).
struct PadSurf {
  Grid g;
  std::vector<double> v;  // [M2][M1]
  PadSurf() = default;
  explicit PadSurf(const Grid& g_);
  PadSurf& operator+=(const PadSurf& o);
  PadSurf& operator-=(const PadSurf& o);
  PadSurf& operator*=(const PadSurf& o);
  PadSurf& operator*=(double a);
};
struct PadVol {
  Grid g;
  std::vector<double> v;  // [N3][M2][M1]
  PadVol() = default;
  explicit PadVol(const Grid& g_);
  PadVol& operator+=(const PadVol& o);
  PadVol& operator-=(const PadVol& o);
  PadVol& operator*=(const PadVol& o);
  PadVol& operator*=(double a);
};
PadSurf operator+(PadSurf a, const PadSurf& b);
PadSurf operator-(PadSurf a, const PadSurf& b);
PadSurf operator*(PadSurf a, const PadSurf& b);
PadSurf operator*(double a, PadSurf b);
PadVol operator+(PadVol a, const PadVol& b);
PadVol operator-(PadVol a, const PadVol& b);
PadVol operator*(PadVol a, const PadVol& b);
PadVol operator*(double a, PadVol b);

PadSurf pad(const SurfaceField& f);
PadVol pad(const VolumeField& f);
SurfaceField unpad(const PadSurf& p);
VolumeField unpad(const PadVol& p);
/// Padded field of a vertical profile (constant per level).
PadVol pad_profile(const Grid& g, const std::vector<double>& profile);
/// Trace of a padded volume buffer at x3 = 0.
PadSurf pad_top(const PadVol& p);

}  // namespace shearflow
