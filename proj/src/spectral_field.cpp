#include "blab/spectral_field.hpp"

#include <cmath>

#include "blab/kernels.hpp"

namespace blab {

const char* parity_name(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    default: return "none";
  }
}

Parity flip(Parity p) {
  if (p == Parity::even) return Parity::odd;
  if (p == Parity::odd) return Parity::even;
  return Parity::none;
}

Parity product_parity(Parity a, Parity b) {
  if (a == Parity::none || b == Parity::none) return Parity::none;
  return a == b ? Parity::even : Parity::odd;
}

Parity sum_parity(Parity a, Parity b) { return a == b ? a : Parity::none; }

SpectralField::SpectralField(const Grid& g, Parity p) : grid_(g), parity_(p), c_(g.size()) {}

cplx& SpectralField::at(const IVec3& k) {
  if (!grid_.representable(k)) throw Error("SpectralField::at: wavevector outside grid");
  return c_[grid_.flat_k(k)];
}

cplx SpectralField::at(const IVec3& k) const {
  if (!grid_.representable(k)) throw Error("SpectralField::at: wavevector outside grid");
  return c_[grid_.flat_k(k)];
}

void SpectralField::set_pair(const IVec3& k, cplx value) {
  at(k) = value;
  at(IVec3{-k[0], -k[1], -k[2]}) = std::conj(value);
  if (k == IVec3{0, 0, 0}) at(k) = value.real();
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(grid_, o.grid_, "SpectralField +=");
  kernels::for_each_index(c_.size(), [&](std::size_t i) { c_[i] += o.c_[i]; });
  parity_ = sum_parity(parity_, o.parity_);
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(grid_, o.grid_, "SpectralField -=");
  kernels::for_each_index(c_.size(), [&](std::size_t i) { c_[i] -= o.c_[i]; });
  parity_ = sum_parity(parity_, o.parity_);
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  kernels::for_each_index(c_.size(), [&](std::size_t i) { c_[i] *= s; });
  return *this;
}

SpectralField& SpectralField::operator*=(cplx s) {
  kernels::for_each_index(c_.size(), [&](std::size_t i) { c_[i] *= s; });
  return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& o) {
  require_same_grid(grid_, o.grid_, "SpectralField axpy");
  kernels::for_each_index(c_.size(), [&](std::size_t i) { c_[i] += s * o.c_[i]; });
  parity_ = sum_parity(parity_, o.parity_);
  return *this;
}

void SpectralField::set_zero() {
  for (auto& x : c_) x = 0.0;
}

bool SpectralField::is_zero() const {
  for (const auto& x : c_)
    if (x != cplx(0.0)) return false;
  return true;
}

double SpectralField::max_abs() const {
  double m = 0;
  for (const auto& x : c_) m = std::max(m, std::abs(x));
  return m;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }
SpectralField operator-(SpectralField a) { return a *= -1.0; }

double l2_distance(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid(), b.grid(), "l2_distance");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a.coeffs()[i] - b.coeffs()[i]);
  return std::sqrt(s);
}

}  // namespace blab
