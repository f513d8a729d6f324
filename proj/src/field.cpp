#include "shearflow/field.hpp"

#include <cassert>
#include <stdexcept>

#include "shearflow/fft.hpp"

namespace shearflow {

namespace {

// Conjugate-pair the columns of the half spectrum that carry their own
// Hermitian partner (k1 = 0 and, when present, k1 = N1/2).
void hermitize_planes(const Grid& g, cplx* spec, int nplanes) {
  const int K1 = g.K1(), N2 = g.N2();
  for (int pl = 0; pl < nplanes; ++pl) {
    cplx* s = spec + (size_t)pl * K1 * N2;
    for (int k1 : {0, g.N1() / 2}) {
      if (k1 >= K1) continue;
      // row 0 and Nyquist row pair with themselves: force them real
      s[(size_t)0 * K1 + k1] = s[(size_t)0 * K1 + k1].real();
      if (N2 % 2 == 0)
        s[(size_t)(N2 / 2) * K1 + k1] = s[(size_t)(N2 / 2) * K1 + k1].real();
      for (int k2 = 1; k2 < (N2 + 1) / 2; ++k2) {
        cplx a = s[(size_t)k2 * K1 + k1];
        cplx b = s[(size_t)(N2 - k2) * K1 + k1];
        cplx avg = 0.5 * (a + std::conj(b));
        s[(size_t)k2 * K1 + k1] = avg;
        s[(size_t)(N2 - k2) * K1 + k1] = std::conj(avg);
      }
    }
  }
}

}  // namespace

SurfaceField::SurfaceField(const Grid& g) : g_(g) {
  phys_.assign((size_t)g.N1() * g.N2(), 0.0);
  spec_.assign((size_t)g.K1() * g.N2(), cplx(0.0));
  phys_ok_ = spec_ok_ = true;
}

void SurfaceField::ensure_phys() const {
  if (phys_ok_) return;
  assert(spec_ok_);
  phys_.resize((size_t)g_.N1() * g_.N2());
  g_.fft().surf_bwd(spec_.data(), phys_.data());
  phys_ok_ = true;
}
void SurfaceField::ensure_spec() const {
  if (spec_ok_) return;
  assert(phys_ok_);
  spec_.resize((size_t)g_.K1() * g_.N2());
  g_.fft().surf_fwd(phys_.data(), spec_.data());
  spec_ok_ = true;
}

std::span<const double> SurfaceField::phys() const {
  ensure_phys();
  return phys_;
}
std::span<const cplx> SurfaceField::spec() const {
  ensure_spec();
  return spec_;
}
std::span<double> SurfaceField::phys_mut() {
  ensure_phys();
  spec_ok_ = false;
  return phys_;
}
std::span<cplx> SurfaceField::spec_mut() {
  ensure_spec();
  phys_ok_ = false;
  return spec_;
}

double SurfaceField::p(int i1, int i2) const {
  ensure_phys();
  return phys_[(size_t)i2 * g_.N1() + i1];
}
cplx SurfaceField::c(int k1, int k2) const {
  ensure_spec();
  return spec_[(size_t)k2 * g_.K1() + k1];
}

void SurfaceField::set_zero() {
  phys_.assign((size_t)g_.N1() * g_.N2(), 0.0);
  spec_.assign((size_t)g_.K1() * g_.N2(), cplx(0.0));
  phys_ok_ = spec_ok_ = true;
}

void SurfaceField::enforce_hermitian() {
  ensure_spec();
  phys_ok_ = false;
  hermitize_planes(g_, spec_.data(), 1);
}

VolumeField::VolumeField(const Grid& g) : g_(g) {
  phys_.assign((size_t)g.N1() * g.N2() * g.N3(), 0.0);
  spec_.assign((size_t)g.K1() * g.N2() * g.N3(), cplx(0.0));
  phys_ok_ = spec_ok_ = true;
}

void VolumeField::ensure_phys() const {
  if (phys_ok_) return;
  assert(spec_ok_);
  phys_.resize((size_t)g_.N1() * g_.N2() * g_.N3());
  g_.fft().vol_bwd(spec_.data(), phys_.data());
  phys_ok_ = true;
}
void VolumeField::ensure_spec() const {
  if (spec_ok_) return;
  assert(phys_ok_);
  spec_.resize((size_t)g_.K1() * g_.N2() * g_.N3());
  g_.fft().vol_fwd(phys_.data(), spec_.data());
  spec_ok_ = true;
}

std::span<const double> VolumeField::phys() const {
  ensure_phys();
  return phys_;
}
std::span<const cplx> VolumeField::spec() const {
  ensure_spec();
  return spec_;
}
std::span<double> VolumeField::phys_mut() {
  ensure_phys();
  spec_ok_ = false;
  return phys_;
}
std::span<cplx> VolumeField::spec_mut() {
  ensure_spec();
  phys_ok_ = false;
  return spec_;
}

double VolumeField::p(int i1, int i2, int l) const {
  ensure_phys();
  return phys_[((size_t)l * g_.N2() + i2) * g_.N1() + i1];
}
cplx VolumeField::c(int k1, int k2, int l) const {
  ensure_spec();
  return spec_[((size_t)l * g_.N2() + k2) * g_.K1() + k1];
}

void VolumeField::set_zero() {
  phys_.assign((size_t)g_.N1() * g_.N2() * g_.N3(), 0.0);
  spec_.assign((size_t)g_.K1() * g_.N2() * g_.N3(), cplx(0.0));
  phys_ok_ = spec_ok_ = true;
}

void VolumeField::enforce_hermitian() {
  ensure_spec();
  phys_ok_ = false;
  hermitize_planes(g_, spec_.data(), g_.N3());
}

VolumeField& VectorVolumeField::comp(int i) {
  switch (i) {
    case 0: return x;
    case 1: return y;
    default: return z;
  }
}
const VolumeField& VectorVolumeField::comp(int i) const {
  switch (i) {
    case 0: return x;
    case 1: return y;
    default: return z;
  }
}

int SymTensorVolumeField::index(int i, int j) {
  if (i > j) std::swap(i, j);
  // (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
  static constexpr int map[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  return map[i][j];
}

}  // namespace shearflow
