#pragma once

#include <complex>
#include <vector>

#include "blab/grid.hpp"

namespace blab {

using cplx = std::complex<double>;

enum class Parity { even, odd, none };

const char* parity_name(Parity p);
Parity flip(Parity p);
/// Parity of a product of fields.
Parity product_parity(Parity a, Parity b);
/// Parity of a sum of fields: shared parity, or none.
Parity sum_parity(Parity a, Parity b);

/// Fourier coefficients W_k of a real field, f(x) = sum_k W_k e^{i k'.x}.
/// Storage is the full N1xN2xN3 array in FFT order; the Nyquist planes are
/// never populated.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const Grid& g, Parity p = Parity::none);

  const Grid& grid() const { return grid_; }
  Parity parity() const { return parity_; }
  void set_parity(Parity p) { parity_ = p; }

  std::vector<cplx>& coeffs() { return c_; }
  const std::vector<cplx>& coeffs() const { return c_; }
  std::size_t size() const { return c_.size(); }
  cplx* data() { return c_.data(); }
  const cplx* data() const { return c_.data(); }

  /// Coefficient for wavevector k. Throws if k is not representable.
  cplx& at(const IVec3& k);
  cplx at(const IVec3& k) const;
  /// Sets W_k and W_{-k} = conj(W_k) together.
  void set_pair(const IVec3& k, cplx value);

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  SpectralField& operator*=(cplx s);
  /// this += s * o
  SpectralField& axpy(double s, const SpectralField& o);

  void set_zero();
  bool is_zero() const;
  /// max_k |W_k|
  double max_abs() const;

 private:
  Grid grid_{};
  Parity parity_ = Parity::none;
  std::vector<cplx> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);
inline SpectralField operator*(SpectralField a, double s) { return a *= s; }
SpectralField operator-(SpectralField a);

/// sqrt(sum_k |a_k - b_k|^2)
double l2_distance(const SpectralField& a, const SpectralField& b);

}  // namespace blab
