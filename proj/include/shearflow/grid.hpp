#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace shearflow {

using cplx = std::complex<double>;

namespace detail {
class FftEngine;
struct GridImpl;
}  // namespace detail

/// Tensor-product grid on the slab Omega = (L1 T) x (L2 T) x (-b, 0):
/// Fourier collocation in x1, x2 and Chebyshev-Gauss-Lobatto nodes in x3
/// (ascending, x3[0] = -b, x3[N3-1] = 0).  Immutable; cheap to copy.
class Grid {
 public:
  Grid() = default;

  double L1() const;
  double L2() const;
  double b() const;
  int N1() const;
  int N2() const;
  int N3() const;
  int max_order() const;

  /// Stored spectral width of the r2c layout, N1/2 + 1.
  int K1() const;
  /// Padded physical sizes for dealiased products (3N/2 rule).
  int M1() const;
  int M2() const;
  int K1p() const;

  std::span<const double> x3() const;
  double x3(int j) const;
  /// Clenshaw-Curtis quadrature weights on [-b, 0].
  std::span<const double> w3() const;

  /// Signed wavenumbers for stored spectral indices.
  double xi1(int k1) const;         // 2 pi k1 / L1, k1 = 0..N1/2
  double xi2(int k2) const;         // signed frequency of row index k2
  double xi_abs(int k1, int k2) const;
  double xi_sq(int k1, int k2) const;
  bool nyquist1(int k1) const;
  bool nyquist2(int k2) const;

  /// Parseval weight of a stored mode column (2 for duplicated k1 columns).
  double hermitian_weight(int k1) const;
  /// Horizontal trapezoid weight L1 L2 / (N1 N2).
  double horiz_weight() const;
  double area() const { return L1() * L2(); }
  double volume() const { return L1() * L2() * b(); }

  /// Chebyshev differentiation matrix of the given order on the x3 nodes.
  const Eigen::MatrixXd& dmat(int order) const;

  detail::FftEngine& fft() const;

  bool valid() const { return p_ != nullptr; }
  bool same_as(const Grid& other) const { return p_ == other.p_; }

 private:
  friend Grid make_grid(double, double, double, int, int, int, int);
  std::shared_ptr<const detail::GridImpl> p_;
};

/// Builds a grid.  N1, N2 must be even and >= 4; N3 >= 5; lengths positive.
/// max_order bounds the differentiation order served by dmat()/diff().
Grid make_grid(double L1, double L2, double b, int N1, int N2, int N3,
               int max_order = 8);

}  // namespace shearflow
