#pragma once

// Data-parallel loop kernels. Each kernel has an OpenMP version and a serial
// reference in kernels::serial; both write every output element exactly once
// with identical arithmetic, so results agree bitwise.

#include <cstddef>

#include "blab/grid.hpp"

namespace blab::kernels {

/// Calls f(flat_index, k) for every stored mode of the grid.
template <class F>
void for_each_mode(const Grid& g, F&& f) {
  const int n0 = g.N[0], n1 = g.N[1], n2 = g.N[2];
#pragma omp parallel for schedule(static)
  for (int i0 = 0; i0 < n0; ++i0) {
    const int k0 = g.wavenumber(0, i0);
    for (int i1 = 0; i1 < n1; ++i1) {
      const int k1 = g.wavenumber(1, i1);
      std::size_t idx = g.flat(i0, i1, 0);
      for (int i2 = 0; i2 < n2; ++i2, ++idx) f(idx, IVec3{k0, k1, g.wavenumber(2, i2)});
    }
  }
}

/// Calls f(i) for i in [0, n).
template <class F>
void for_each_index(std::size_t n, F&& f) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) f(static_cast<std::size_t>(i));
}

/// y[i] += a[i] * b[i]
void mul_acc(const double* a, const double* b, double* y, std::size_t n);
/// y[i] += s * x[i]
void axpy(double s, const double* x, double* y, std::size_t n);

namespace serial {

template <class F>
void for_each_mode(const Grid& g, F&& f) {
  for (int i0 = 0; i0 < g.N[0]; ++i0) {
    const int k0 = g.wavenumber(0, i0);
    for (int i1 = 0; i1 < g.N[1]; ++i1) {
      const int k1 = g.wavenumber(1, i1);
      std::size_t idx = g.flat(i0, i1, 0);
      for (int i2 = 0; i2 < g.N[2]; ++i2, ++idx) f(idx, IVec3{k0, k1, g.wavenumber(2, i2)});
    }
  }
}

template <class F>
void for_each_index(std::size_t n, F&& f) {
  for (std::size_t i = 0; i < n; ++i) f(i);
}

void mul_acc(const double* a, const double* b, double* y, std::size_t n);
void axpy(double s, const double* x, double* y, std::size_t n);

}  // namespace serial
}  // namespace blab::kernels
