#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace blab {

/// Error raised on malformed input anywhere in the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using IVec3 = std::array<int, 3>;

/// Periodic box [0,L1]x[0,L2]x[-L3/2,L3/2) with N1xN2xN3 Fourier modes.
struct Grid {
  std::array<double, 3> L{};
  std::array<int, 3> N{};
  double dealias_fraction = 2.0 / 3.0;

  /// 2*pi periodic cube with n modes per axis.
  static Grid cube(int n, double dealias_fraction = 2.0 / 3.0);

  /// Throws Error unless N_i even, N_i >= 4, L_i > 0, fraction in (0,1].
  void validate() const;

  std::size_t size() const {
    return static_cast<std::size_t>(N[0]) * N[1] * N[2];
  }
  double volume() const { return L[0] * L[1] * L[2]; }

  /// Storage index along an axis to integer wavenumber.
  int wavenumber(int axis, int i) const { return i < N[axis] / 2 ? i : i - N[axis]; }
  int storage(int axis, int k) const { return k >= 0 ? k : k + N[axis]; }
  std::size_t flat(int i0, int i1, int i2) const {
    return (static_cast<std::size_t>(i0) * N[1] + i1) * N[2] + i2;
  }
  std::size_t flat_k(const IVec3& k) const {
    return flat(storage(0, k[0]), storage(1, k[1]), storage(2, k[2]));
  }
  IVec3 k_of(std::size_t idx) const;

  double kprime(int axis, int k) const;

  /// |k_i| < N_i/2 on every axis.
  bool representable(const IVec3& k) const;
  /// Largest |k_i| kept by the dealias mask on an axis.
  int dealias_max(int axis) const;
  bool dealiased(const IVec3& k) const;

  bool operator==(const Grid& o) const {
    return L == o.L && N == o.N && dealias_fraction == o.dealias_fraction;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

/// Throws Error naming the operation when grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace blab
