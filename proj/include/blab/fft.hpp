#pragma once

#include <array>
#include <mutex>
#include <vector>

#include "blab/spectral_field.hpp"

namespace blab {

using Shape = std::array<int, 3>;

inline std::size_t shape_size(const Shape& s) {
  return static_cast<std::size_t>(s[0]) * s[1] * s[2];
}

/// FFTW-aligned complex buffer on a physical grid of the given shape, with
/// in-place transforms. backward() evaluates sum_k c_k e^{+2 pi i j.k/M};
/// forward() applies the unnormalized e^{-} sum.
class FftBuffer {
 public:
  explicit FftBuffer(const Shape& s);
  ~FftBuffer();
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return n_; }
  cplx* data() { return data_; }
  const cplx* data() const { return data_; }
  void zero();

  void backward();
  void forward();

 private:
  Shape shape_;
  std::size_t n_;
  cplx* data_;
};

/// Guards every FFTW planner call in the library.
std::mutex& fftw_planner_mutex();

/// Smallest 2,3,5-smooth integer >= n.
int smooth_size(int n);

/// Values on the native grid x_j = j L / N (z measured from 0).
std::vector<double> to_physical(const SpectralField& f);
/// Values on a uniform M-point grid; every populated mode must satisfy
/// |k_i| < M_i / 2.
std::vector<double> to_physical(const SpectralField& f, const Shape& M);
/// Inverse of to_physical on the native grid; keeps all representable modes.
SpectralField from_physical(const std::vector<double>& values, const Grid& g, Parity p);
/// Coefficients with |k_i| <= dealias_max(i) from values on an M grid.
SpectralField from_physical(const std::vector<double>& values, const Shape& M, const Grid& g,
                            Parity p);

/// Grid shape on which products of two dealiased fields are alias-free for
/// all retained output modes: M_i >= 3 K_i + 1.
Shape product_shape(const Grid& g);

/// Pointwise product a*b, evaluated on product_shape(g) and dealiased.
SpectralField multiply(const SpectralField& a, const SpectralField& b);

namespace reference {
/// Direct O(N^6) DFT evaluation of to_physical on the native grid.
std::vector<double> to_physical(const SpectralField& f);
/// Direct DFT inverse.
SpectralField from_physical(const std::vector<double>& values, const Grid& g, Parity p);
}  // namespace reference

}  // namespace blab
