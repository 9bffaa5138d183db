#include "blab/grid.hpp"

#include <cmath>
#include <numbers>

namespace blab {

Grid Grid::cube(int n, double dealias_fraction) {
  Grid g;
  g.L = {2 * std::numbers::pi, 2 * std::numbers::pi, 2 * std::numbers::pi};
  g.N = {n, n, n};
  g.dealias_fraction = dealias_fraction;
  g.validate();
  return g;
}

void Grid::validate() const {
  for (int a = 0; a < 3; ++a) {
    if (N[a] < 4 || N[a] % 2 != 0)
      throw Error("grid: N" + std::to_string(a + 1) + "=" + std::to_string(N[a]) +
                  " must be even and >= 4");
    if (!(L[a] > 0) || !std::isfinite(L[a]))
      throw Error("grid: L" + std::to_string(a + 1) + " must be positive");
  }
  if (!(dealias_fraction > 0 && dealias_fraction <= 1))
    throw Error("grid: dealias_fraction must lie in (0,1]");
}

IVec3 Grid::k_of(std::size_t idx) const {
  const int i2 = static_cast<int>(idx % N[2]);
  idx /= N[2];
  const int i1 = static_cast<int>(idx % N[1]);
  const int i0 = static_cast<int>(idx / N[1]);
  return {wavenumber(0, i0), wavenumber(1, i1), wavenumber(2, i2)};
}

double Grid::kprime(int axis, int k) const { return 2 * std::numbers::pi * k / L[axis]; }

bool Grid::representable(const IVec3& k) const {
  for (int a = 0; a < 3; ++a)
    if (2 * std::abs(k[a]) >= N[a]) return false;
  return true;
}

int Grid::dealias_max(int axis) const {
  // Small slack so that 2/3 * 12/2 = 4 keeps |k| = 4.
  int m = static_cast<int>(std::floor(dealias_fraction * N[axis] / 2 + 1e-9));
  return std::min(m, N[axis] / 2 - 1);
}

bool Grid::dealiased(const IVec3& k) const {
  for (int a = 0; a < 3; ++a)
    if (std::abs(k[a]) > dealias_max(a)) return false;
  return true;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b) throw Error(std::string(what) + ": grid mismatch");
}

}  // namespace blab
