#pragma once

#include <algorithm>
#include <cmath>

#include "blab/decomposition.hpp"
#include "blab/norms.hpp"

namespace blab::test {

inline double rel_diff(const SpectralField& a, const SpectralField& b) {
  const double s = std::max(l2_norm(a), l2_norm(b));
  return s == 0 ? 0 : l2_distance(a, b) / s;
}

inline double state_norm(const PrimitiveState& W) {
  return std::sqrt(inner(W.u, W.u) + inner(W.v, W.v) + inner(W.rho, W.rho));
}

inline double state_rel_diff(const PrimitiveState& a, const PrimitiveState& b) {
  const double d = std::sqrt(std::pow(l2_distance(a.u, b.u), 2) + std::pow(l2_distance(a.v, b.v), 2) +
                             std::pow(l2_distance(a.rho, b.rho), 2));
  const double s = std::max(state_norm(a), state_norm(b));
  return s == 0 ? d : d / s;
}

/// Single real mode cos(k.x) as two conjugate coefficients 1/2.
inline SpectralField cos_mode(const Grid& g, const IVec3& k, Parity p = Parity::none) {
  SpectralField f(g, p);
  f.at(k) += 0.5;
  f.at(IVec3{-k[0], -k[1], -k[2]}) += 0.5;
  return f;
}

}  // namespace blab::test
