#include "shearflow/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <stdexcept>
#include <vector>

namespace shearflow::detail {

struct FftEngine::Impl {
  int N1, N2, N3, M1, M2;
  int K1, K1p;
  fftw_plan sf, sb, vf, vb, sfp, sbp, vfp, vbp;
};

namespace {

fftw_plan plan_r2c(int n1, int n2, int howmany, double* rin, fftw_complex* cout) {
  int n[2] = {n2, n1};  // row-major: x2 slow, x1 fast
  int k1 = n1 / 2 + 1;
  return fftw_plan_many_dft_r2c(2, n, howmany, rin, nullptr, 1, n1 * n2, cout,
                                nullptr, 1, k1 * n2,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
}

fftw_plan plan_c2r(int n1, int n2, int howmany, fftw_complex* cin, double* rout) {
  int n[2] = {n2, n1};
  int k1 = n1 / 2 + 1;
  return fftw_plan_many_dft_c2r(2, n, howmany, cin, nullptr, 1, k1 * n2, rout,
                                nullptr, 1, n1 * n2,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
}

}  // namespace

FftEngine::FftEngine(int N1, int N2, int N3, int M1, int M2) : impl_(new Impl) {
  impl_->N1 = N1;
  impl_->N2 = N2;
  impl_->N3 = N3;
  impl_->M1 = M1;
  impl_->M2 = M2;
  impl_->K1 = N1 / 2 + 1;
  impl_->K1p = M1 / 2 + 1;

  // FFTW plans need representative buffers; sized for the volume batch.
  std::vector<double> r((size_t)M1 * M2 * N3);
  std::vector<cplx> c((size_t)(M1 / 2 + 1) * M2 * N3);
  auto* rp = r.data();
  auto* cp = reinterpret_cast<fftw_complex*>(c.data());

  impl_->sf = plan_r2c(N1, N2, 1, rp, cp);
  impl_->sb = plan_c2r(N1, N2, 1, cp, rp);
  impl_->vf = plan_r2c(N1, N2, N3, rp, cp);
  impl_->vb = plan_c2r(N1, N2, N3, cp, rp);
  impl_->sfp = plan_r2c(M1, M2, 1, rp, cp);
  impl_->sbp = plan_c2r(M1, M2, 1, cp, rp);
  impl_->vfp = plan_r2c(M1, M2, N3, rp, cp);
  impl_->vbp = plan_c2r(M1, M2, N3, cp, rp);
  if (!impl_->sf || !impl_->sb || !impl_->vf || !impl_->vb || !impl_->sfp ||
      !impl_->sbp || !impl_->vfp || !impl_->vbp)
    throw std::runtime_error("FftEngine: plan creation failed");
}

FftEngine::~FftEngine() {
  fftw_destroy_plan(impl_->sf);
  fftw_destroy_plan(impl_->sb);
  fftw_destroy_plan(impl_->vf);
  fftw_destroy_plan(impl_->vb);
  fftw_destroy_plan(impl_->sfp);
  fftw_destroy_plan(impl_->sbp);
  fftw_destroy_plan(impl_->vfp);
  fftw_destroy_plan(impl_->vbp);
  delete impl_;
}

namespace {

void run_fwd(fftw_plan plan, const double* in, cplx* out, size_t n_in,
             size_t n_out, double norm) {
  // r2c preserves its input for FFTW_ESTIMATE 2D plans, but copy anyway so
  // the const contract holds unconditionally.
  std::vector<double> tmp(in, in + n_in);
  fftw_execute_dft_r2c(plan, tmp.data(), reinterpret_cast<fftw_complex*>(out));
  for (size_t i = 0; i < n_out; ++i) out[i] *= norm;
}

void run_bwd(fftw_plan plan, const cplx* in, double* out, size_t n_in) {
  // multi-dim c2r destroys its input; work on a copy.
  std::vector<cplx> tmp(in, in + n_in);
  fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(tmp.data()), out);
}

}  // namespace

void FftEngine::surf_fwd(const double* in, cplx* out) const {
  const auto& d = *impl_;
  run_fwd(d.sf, in, out, (size_t)d.N1 * d.N2, (size_t)d.K1 * d.N2,
          1.0 / ((double)d.N1 * d.N2));
}
void FftEngine::surf_bwd(const cplx* in, double* out) const {
  const auto& d = *impl_;
  run_bwd(d.sb, in, out, (size_t)d.K1 * d.N2);
}
void FftEngine::vol_fwd(const double* in, cplx* out) const {
  const auto& d = *impl_;
  run_fwd(d.vf, in, out, (size_t)d.N1 * d.N2 * d.N3,
          (size_t)d.K1 * d.N2 * d.N3, 1.0 / ((double)d.N1 * d.N2));
}
void FftEngine::vol_bwd(const cplx* in, double* out) const {
  const auto& d = *impl_;
  run_bwd(d.vb, in, out, (size_t)d.K1 * d.N2 * d.N3);
}
void FftEngine::surf_fwd_pad(const double* in, cplx* out) const {
  const auto& d = *impl_;
  run_fwd(d.sfp, in, out, (size_t)d.M1 * d.M2, (size_t)d.K1p * d.M2,
          1.0 / ((double)d.M1 * d.M2));
}
void FftEngine::surf_bwd_pad(const cplx* in, double* out) const {
  const auto& d = *impl_;
  run_bwd(d.sbp, in, out, (size_t)d.K1p * d.M2);
}
void FftEngine::vol_fwd_pad(const double* in, cplx* out) const {
  const auto& d = *impl_;
  run_fwd(d.vfp, in, out, (size_t)d.M1 * d.M2 * d.N3,
          (size_t)d.K1p * d.M2 * d.N3, 1.0 / ((double)d.M1 * d.M2));
}
void FftEngine::vol_bwd_pad(const cplx* in, double* out) const {
  const auto& d = *impl_;
  run_bwd(d.vbp, in, out, (size_t)d.K1p * d.M2 * d.N3);
}

}  // namespace shearflow::detail
