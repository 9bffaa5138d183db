#pragma once

#include <cstdint>
#include <string>

#include "blab/decomposition.hpp"

namespace blab {

/// Seeded random field with |W_k| = amplitude * e^{-decay |k|} and random
/// phases, Hermitian, of the given z-parity, zero mean and dealiased.
/// Modes on degenerate symmetry orbits (k3 = 0 or k1 = k2 = 0) are projected
/// and may lose modulus.
SpectralField random_field(const Grid& g, std::uint64_t seed, Parity parity, double decay,
                           double amplitude = 1.0);

/// Random parity-correct state with no barotropic divergence.
PrimitiveState random_state(const Grid& g, std::uint64_t seed, double decay = 0.5,
                            double amplitude = 1.0);

/// Built-in slow initial data:
///   "zonal"         A [cos x cos z + 0.5 cos 2x cos 2z]   (y-independent)
///   "dipole"        A [cos x cos z + cos(x+y) cos z]      (|k|^2 = 2 and 3)
///   "random-gevrey" random_field(seed, even, decay) scaled to |q|_0 = A
/// in units where the box is 2 pi periodic along each axis.
SpectralField slow_initial_data(const std::string& family, const Grid& g, double amplitude,
                                std::uint64_t seed = 1, double decay = 0.5);

/// Geostrophic state v = perp_grad(Delta^{-1} q), rho = -d_z Delta^{-1} q.
PrimitiveState geostrophic_state(const SpectralField& q);

}  // namespace blab
