#include "blab/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "blab/norms.hpp"

namespace blab {
namespace {

bool lex_less(const IVec3& a, const IVec3& b) { return a < b; }

IVec3 neg(const IVec3& k) { return {-k[0], -k[1], -k[2]}; }
IVec3 mirror(const IVec3& k) { return {k[0], k[1], -k[2]}; }

IVec3 orbit_rep(const IVec3& k) {
  IVec3 r = k;
  for (const IVec3& c : {mirror(k), neg(k), neg(mirror(k))})
    if (lex_less(c, r)) r = c;
  return r;
}

}  // namespace

SpectralField random_field(const Grid& g, std::uint64_t seed, Parity parity, double decay,
                           double amplitude) {
  SpectralField f(g, parity);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  const double s = parity == Parity::odd ? -1.0 : 1.0;
  // One phase per symmetry orbit, drawn in storage order of the orbit
  // representative so the result depends only on the seed.
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const IVec3 k = g.k_of(idx);
    if (!g.dealiased(k) || k == IVec3{0, 0, 0}) continue;
    if (orbit_rep(k) != k) continue;
    const double th = phase(rng);
    const double a = amplitude * std::exp(-decay * std::sqrt(double(knorm2(k))));
    const cplx c = std::polar(a, th);
    f.at(neg(mirror(k))) = s * std::conj(c);
    f.at(neg(k)) = std::conj(c);
    f.at(mirror(k)) = s * c;
    f.at(k) = c;
  }
  if (parity != Parity::none) f = parity_project(f, parity);
  f = hermitian_project(f);
  f.coeffs()[0] = 0;
  return f;
}

PrimitiveState random_state(const Grid& g, std::uint64_t seed, double decay, double amplitude) {
  PrimitiveState W{random_field(g, seed * 3 + 1, Parity::even, decay, amplitude),
                   random_field(g, seed * 3 + 2, Parity::even, decay, amplitude),
                   random_field(g, seed * 3 + 3, Parity::odd, decay, amplitude)};
  remove_barotropic_divergence(W.u, W.v);
  return W;
}

SpectralField slow_initial_data(const std::string& family, const Grid& g, double amplitude,
                                std::uint64_t seed, double decay) {
  SpectralField q(g, Parity::even);
  // cos(a.x) cos(b z) = (1/4) sum over sign patterns of e^{i(+-a.x +- b z)}
  auto add_cc = [&](int kx, int ky, int kz, double amp) {
    for (int sh : {1, -1})
      for (int sz : {1, -1}) q.at(IVec3{sh * kx, sh * ky, sz * kz}) += 0.25 * amp;
  };
  if (family == "zonal") {
    add_cc(1, 0, 1, amplitude);
    add_cc(2, 0, 2, 0.5 * amplitude);
  } else if (family == "dipole") {
    add_cc(1, 0, 1, amplitude);
    add_cc(1, 1, 1, amplitude);
  } else if (family == "random-gevrey") {
    q = random_field(g, seed, Parity::even, decay, 1.0);
    const double n = l2_norm(q);
    if (n > 0) q *= amplitude / n;
  } else {
    throw Error("unknown slow initial-data family '" + family +
                "' (expected zonal, dipole or random-gevrey)");
  }
  return dealias(q);
}

PrimitiveState geostrophic_state(const SpectralField& q) {
  const SpectralField psi = inv_laplacian3(q);
  PrimitiveState W{-dy(psi), dx(psi), -dz(psi)};
  W.u.set_parity(Parity::even);
  W.v.set_parity(Parity::even);
  W.rho.set_parity(Parity::odd);
  return W;
}

}  // namespace blab
