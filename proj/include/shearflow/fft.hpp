#pragma once

#include <complex>

namespace shearflow::detail {

using cplx = std::complex<double>;

/// FFTW plan bundle for one grid-size family: 2D r2c/c2r transforms on the
/// base (N1 x N2) and padded (M1 x M2) horizontal grids, batched over N3
/// levels for volume data.  Forward transforms are normalized so that the
/// coefficients are those of the expansion f(x) = sum_k fhat(k) e^{i xi(k).x}.
class FftEngine {
 public:
  FftEngine(int N1, int N2, int N3, int M1, int M2);
  ~FftEngine();
  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

  // base grid
  void surf_fwd(const double* in, cplx* out) const;
  void surf_bwd(const cplx* in, double* out) const;
  void vol_fwd(const double* in, cplx* out) const;
  void vol_bwd(const cplx* in, double* out) const;
  // padded grid
  void surf_fwd_pad(const double* in, cplx* out) const;
  void surf_bwd_pad(const cplx* in, double* out) const;
  void vol_fwd_pad(const double* in, cplx* out) const;
  void vol_bwd_pad(const cplx* in, double* out) const;

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace shearflow::detail
