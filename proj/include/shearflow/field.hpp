#pragma once

#include <array>
#include <span>
#include <vector>

#include "shearflow/grid.hpp"

namespace shearflow {

/// Scalar field on the periodic cross-section Sigma with dual
/// physical / Fourier representation.  Physical layout: [N2][N1], x1 fastest.
/// Spectral layout: [N2][K1] (r2c half-spectrum).  Accessors materialize the
/// requested representation on demand; mutating accessors invalidate the
/// other one.
class SurfaceField {
 public:
  SurfaceField() = default;
  explicit SurfaceField(const Grid& g);

  const Grid& grid() const { return g_; }
  bool valid() const { return g_.valid(); }

  std::span<const double> phys() const;
  std::span<const cplx> spec() const;
  std::span<double> phys_mut();
  std::span<cplx> spec_mut();
  bool has_phys() const { return phys_ok_; }
  bool has_spec() const { return spec_ok_; }

  double p(int i1, int i2) const;  // physical value (requires phys present)
  cplx c(int k1, int k2) const;    // coefficient (requires spec present)

  void set_zero();
  void enforce_hermitian();  // self-conjugate the k1 = 0 and Nyquist columns

 private:
  void ensure_phys() const;
  void ensure_spec() const;

  Grid g_;
  mutable std::vector<double> phys_;
  mutable std::vector<cplx> spec_;
  mutable bool phys_ok_ = false, spec_ok_ = false;
};

/// Scalar field on the slab Omega.  Physical layout: [N3][N2][N1]
/// (x1 fastest, level planes contiguous); spectral layout: [N3][N2][K1]
/// (Fourier horizontally, nodal vertically).
class VolumeField {
 public:
  VolumeField() = default;
  explicit VolumeField(const Grid& g);

  const Grid& grid() const { return g_; }
  bool valid() const { return g_.valid(); }

  std::span<const double> phys() const;
  std::span<const cplx> spec() const;
  std::span<double> phys_mut();
  std::span<cplx> spec_mut();
  bool has_phys() const { return phys_ok_; }
  bool has_spec() const { return spec_ok_; }

  double p(int i1, int i2, int l) const;
  cplx c(int k1, int k2, int l) const;

  void set_zero();
  void enforce_hermitian();

 private:
  void ensure_phys() const;
  void ensure_spec() const;

  Grid g_;
  mutable std::vector<double> phys_;
  mutable std::vector<cplx> spec_;
  mutable bool phys_ok_ = false, spec_ok_ = false;
};

struct VectorVolumeField {
  VolumeField x, y, z;
  VectorVolumeField() = default;
  explicit VectorVolumeField(const Grid& g) : x(g), y(g), z(g) {}
  VolumeField& comp(int i);
  const VolumeField& comp(int i) const;
  const Grid& grid() const { return x.grid(); }
};

using VectorSurfaceField = std::array<SurfaceField, 3>;

/// Symmetric 3x3 tensor field (xx, xy, xz, yy, yz, zz).
struct SymTensorVolumeField {
  std::array<VolumeField, 6> m;
  SymTensorVolumeField() = default;
  explicit SymTensorVolumeField(const Grid& g)
      : m{VolumeField(g), VolumeField(g), VolumeField(g),
          VolumeField(g), VolumeField(g), VolumeField(g)} {}
  static int index(int i, int j);
  VolumeField& comp(int i, int j) { return m[index(i, j)]; }
  const VolumeField& comp(int i, int j) const { return m[index(i, j)]; }
  const Grid& grid() const { return m[0].grid(); }
};

}  // namespace shearflow
