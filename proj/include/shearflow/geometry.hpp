#pragma once

#include <stdexcept>

#include "shearflow/field.hpp"
#include "shearflow/ops.hpp"
#include "shearflow/params.hpp"

namespace shearflow {

/// Raised when the flattening map degenerates (free surface approaching the
/// bottom or folding over): min J fell below the configured floor.
struct DomainCollapse : std::runtime_error {
  DomainCollapse(double jmin, double floor_)
      : std::runtime_error("domain collapse: min Jacobian " +
                           std::to_string(jmin) + " below floor " +
                           std::to_string(floor_)),
        j_min_found(jmin) {}
  double j_min_found;
};

/// Harmonic extension of a surface function into the slab by decaying
/// Fourier modes: coefficients eta_hat(n) e^{|xi(n)| x3}; the n = 0 mode
/// extends as a constant.  Trace at x3 = 0 equals eta exactly.
VolumeField poisson_extend(const SurfaceField& eta);
/// Analytic vertical derivative of the extension, |xi|^order multipliers.
VolumeField poisson_extend_dz(const SurfaceField& eta, int order);

/// All eta-dependent quantities of the flattening map
/// Phi(x) = (x1, x2, x3 + eta_ext * ramp), ramp = 1 + x3/b, evaluated on the
/// grid.  Immutable after construction.
struct GeometryCache {
  Grid grid;
  SurfaceField eta;
  SurfaceField deta_dt;        // zero if not supplied
  VolumeField eta_ext;         // harmonic extension of eta
  VolumeField deta_ext_dt;     // harmonic extension of deta_dt
  VolumeField dshift_dx1;      // d(eta_ext * ramp)/dx1    ("A")
  VolumeField dshift_dx2;      // d(eta_ext * ramp)/dx2    ("B")
  VolumeField jacobian;        // d(Phi3)/dx3 = 1 + eta_ext/b + d3 eta_ext ramp
  VolumeField inv_jacobian;    // 1/J, pointwise
  VolumeField djacobian_dt;    // deta_ext_dt / b + ramp d3 deta_ext_dt
  VolumeField phi3;            // x3 + eta_ext * ramp
  VolumeField transport;       // deta_ext_dt * ramp * inv_jacobian
  VectorSurfaceField normal;   // (-d1 eta, -d2 eta, 1), non-unit
  std::vector<double> ramp;    // 1 + x3/b per level
  double j_min_found = 1.0;

  /// Entry (i,j) of the coordinate-change matrix (transpose inverse of the
  /// map gradient); rows 0-based.  Constant entries are materialized.
  const VolumeField& metric(int i, int j) const;
  /// metric(i,j) - identity
  const VolumeField& metric_m_id(int i, int j) const;

  std::array<std::array<VolumeField, 3>, 3> metric_;
  std::array<std::array<VolumeField, 3>, 3> metric_m_id_;
};

/// Builds the cache; deta_dt may be null (treated as zero).  Throws
/// DomainCollapse if min J < j_min_floor.
GeometryCache build_geometry(const SurfaceField& eta,
                             const SurfaceField* deta_dt, const Params& params,
                             double j_min_floor = 0.1);

// metric-dependent differential operators; at eta == 0 they reduce exactly
// to the flat gradient, divergence, symmetric gradient and stress.
VectorVolumeField grad_a(const VolumeField& f, const GeometryCache& c);
VolumeField div_a(const VectorVolumeField& X, const GeometryCache& c);
SymTensorVolumeField sym_grad_a(const VectorVolumeField& u,
                                const GeometryCache& c);
SymTensorVolumeField stress_a(const VolumeField& p, const VectorVolumeField& u,
                              const GeometryCache& c);
VectorVolumeField div_a_tensor(const SymTensorVolumeField& T,
                               const GeometryCache& c);

// flat counterparts (used by the flattened-form residuals)
SymTensorVolumeField sym_grad(const VectorVolumeField& u);
SymTensorVolumeField stress(const VolumeField& p, const VectorVolumeField& u);
VectorVolumeField div_tensor(const SymTensorVolumeField& T);
VolumeField divergence(const VectorVolumeField& u);

/// Full nonlinear mean-curvature operator div(grad eta / sqrt(1+|grad eta|^2))
/// evaluated pseudo-spectrally with dealiasing.
SurfaceField mean_curvature(const SurfaceField& eta);

}  // namespace shearflow
