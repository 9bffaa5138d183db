#pragma once

#include <array>

#include "blab/spectral_field.hpp"

namespace blab {

using FieldPair = std::array<SpectralField, 2>;
using FieldTriple = std::array<SpectralField, 3>;

SpectralField dx(const SpectralField& f);
SpectralField dy(const SpectralField& f);
SpectralField dz(const SpectralField& f);
SpectralField dzz(const SpectralField& f);

FieldPair grad2(const SpectralField& f);
FieldTriple grad3(const SpectralField& f);
/// (-d_y f, d_x f)
FieldPair perp_grad(const SpectralField& f);
/// d_x a + d_y b
SpectralField div2(const SpectralField& a, const SpectralField& b);
/// -d_y a + d_x b
SpectralField curl2(const SpectralField& a, const SpectralField& b);

SpectralField laplacian2(const SpectralField& f);
SpectralField laplacian3(const SpectralField& f);
/// Zero on (k1,k2) = (0,0).
SpectralField inv_laplacian2(const SpectralField& f);
/// Zero on k = 0.
SpectralField inv_laplacian3(const SpectralField& f);

/// g(z) = int_0^z f dz'. Input must carry no k3 = 0 content. The z-constant
/// enforcing g(.,.,0) = 0 is kept on (k1,k2) != 0; the domain mean is dropped.
SpectralField vertical_integral(const SpectralField& f);
/// Inverse of d_z on fields without k3 = 0 content; the result has zero
/// k3 = 0 sector (used for horizontal-mean profiles).
SpectralField inv_dz(const SpectralField& f);

SpectralField xy_average(const SpectralField& f);
SpectralField pz_project(const SpectralField& f);
/// Keeps modes with |k| < kappa (integer norm).
SpectralField low_pass(const SpectralField& f, double kappa);
SpectralField high_pass(const SpectralField& f, double kappa);
SpectralField parity_project(const SpectralField& f, Parity p);
SpectralField dealias(const SpectralField& f);
/// Removes the k = 0 coefficient.
SpectralField zero_mean(const SpectralField& f);
/// Replaces W_k by (W_k + conj(W_{-k}))/2.
SpectralField hermitian_project(const SpectralField& f);

/// |k|^2 with integer components.
inline int knorm2(const IVec3& k) { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }

}  // namespace blab
