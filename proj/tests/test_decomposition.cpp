/// @file test_decomposition.cpp
/// @brief (v, rho) <-> (q, vbar, chi, phi), reconstruction of (w, p), forcings.
///
/// Oracles are the single-mode geostrophic solution written out by hand,
/// round trips on random states and analytic derivatives of trig forcings
/// sampled on the grid and transformed with the direct DFT.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "blab/decomposition.hpp"
#include "blab/fft.hpp"
#include "blab/initial_data.hpp"
#include "test_support.hpp"

using namespace blab;
using blab::test::cos_mode;
using blab::test::rel_diff;
using blab::test::state_rel_diff;

namespace {

// Samples fn on the native grid and transforms with the direct DFT.
SpectralField sampled(const Grid& g, Parity p, double (*fn)(double, double, double)) {
  std::vector<double> vals(g.size());
  for (int i = 0; i < g.N[0]; ++i)
    for (int j = 0; j < g.N[1]; ++j)
      for (int l = 0; l < g.N[2]; ++l)
        vals[g.flat(i, j, l)] = fn(i * g.L[0] / g.N[0], j * g.L[1] / g.N[1], l * g.L[2] / g.N[2]);
  return reference::from_physical(vals, g, p);
}

double max_abs_diff(const SpectralField& a, const SpectralField& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("geostrophic single mode decomposes to q alone") {
  const Grid g = Grid::cube(8);
  const SpectralField q = sampled(g, Parity::even, [](double x, double, double z) {
    return std::cos(x) * std::cos(z);
  });
  const PrimitiveState W{
      SpectralField(g, Parity::even),
      sampled(g, Parity::even, [](double x, double, double z) { return 0.5 * std::sin(x) * std::cos(z); }),
      sampled(g, Parity::odd, [](double x, double, double z) { return -0.5 * std::cos(x) * std::sin(z); })};
  const QGDecomposition d = decompose(W);
  CHECK(max_abs_diff(d.q, q) < 1e-14);
  CHECK(d.vbar_u.max_abs() < 1e-14);
  CHECK(d.vbar_v.max_abs() < 1e-14);
  CHECK(d.chi.max_abs() < 1e-14);
  CHECK(d.phi.max_abs() < 1e-14);

  const PrimitiveState G = geostrophic_state(q);
  CHECK(state_rel_diff(G, W) < 1e-14);
  QGDecomposition dq = QGDecomposition::zero(g);
  dq.q = q;
  const Reconstruction r = reconstruct(dq);
  CHECK(state_rel_diff(r.W, W) < 1e-14);
  CHECK(r.w.max_abs() == 0.0);
}

TEST_CASE("zero state") {
  const Grid g = Grid::cube(8);
  const QGDecomposition d = decompose(PrimitiveState::zero(g));
  for (const SpectralField* f : {&d.q, &d.vbar_u, &d.vbar_v, &d.chi, &d.phi}) CHECK(f->is_zero());
}

TEST_CASE("decomposition relations on random states") {
  const Grid g = Grid::cube(16);
  const PrimitiveState W = random_state(g, 11, 0.2);
  const QGDecomposition d = decompose(W);
  const Reconstruction r = reconstruct(d);
  const SpectralField psi = r.p + d.phi;
  // Delta2 psi = curl v (off the horizontal mean), Delta2 chi = div v
  const SpectralField curl = curl2(W.u, W.v);
  const SpectralField div = div2(W.u, W.v);
  CHECK(rel_diff(laplacian2(psi), curl - xy_average(curl)) < 1e-12);
  CHECK(rel_diff(laplacian2(d.chi), div) < 1e-12);
  CHECK(xy_average(div).max_abs() < 1e-14);
  // vbar, chi have their means removed
  CHECK(d.q.coeffs()[0] == cplx(0.0));
  CHECK(xy_average(d.chi).max_abs() == 0.0);
  CHECK(d.vbar_u.coeffs()[0] == cplx(0.0));
  CHECK(d.phi.coeffs()[0] == cplx(0.0));
}

TEST_CASE("round trips are the identity") {
  const Grid g = Grid::cube(16);
  const PrimitiveState W = random_state(g, 5, 0.1);
  const Reconstruction r = reconstruct(decompose(W));
  CHECK(state_rel_diff(r.W, W) < 1e-12);

  const QGDecomposition d = decompose(W);
  const QGDecomposition d2 = decompose(r.W);
  CHECK(rel_diff(d2.q, d.q) < 1e-12);
  CHECK(rel_diff(d2.vbar_u, d.vbar_u) < 1e-12);
  CHECK(rel_diff(d2.vbar_v, d.vbar_v) < 1e-12);
  CHECK(rel_diff(d2.chi, d.chi) < 1e-12);
  CHECK(rel_diff(d2.phi, d.phi) < 1e-12);
}

TEST_CASE("phi vanishes on z = 0") {
  const Grid g = Grid::cube(16);
  const QGDecomposition d = decompose(random_state(g, 2, 0.2));
  const std::vector<double> vals = to_physical(d.phi);
  double m = 0, scale = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) scale = std::max(scale, std::abs(vals[i]));
  for (int i = 0; i < g.N[0]; ++i)
    for (int j = 0; j < g.N[1]; ++j) m = std::max(m, std::abs(vals[g.flat(i, j, 0)]));
  CHECK(scale > 0);
  CHECK(m < 1e-13 * scale);
}

TEST_CASE("reconstructed w is odd, p even, and the flow is incompressible") {
  const Grid g = Grid::cube(16);
  const Reconstruction r = reconstruct(decompose(random_state(g, 7, 0.2)));
  CHECK(r.w.parity() == Parity::odd);
  CHECK(r.p.parity() == Parity::even);
  CHECK(parity_error(r.w) < 1e-14);
  CHECK(parity_error(r.p) < 1e-14);
  const SpectralField div = div2(r.W.u, r.W.v) + dz(r.w);
  CHECK(div.max_abs() < 1e-12 * l2_norm(r.w));
  CHECK(l2_norm(r.w) > 0);
}

TEST_CASE("chi = 0 gives w = 0") {
  const Grid g = Grid::cube(8);
  QGDecomposition d = decompose(random_state(g, 3, 0.2));
  d.chi.set_zero();
  CHECK(reconstruct(d).w.is_zero());
}

TEST_CASE("geostrophic characterization in both directions") {
  const Grid g = Grid::cube(8);
  for (const IVec3& k : {IVec3{1, 0, 1}, IVec3{1, 2, 1}, IVec3{0, 1, 2}, IVec3{2, 1, 0}}) {
    SpectralField q = cos_mode(g, k);
    q = parity_project(q, Parity::even);
    const PrimitiveState W = geostrophic_state(q);
    const QGDecomposition d = decompose(W);
    CHECK(rel_diff(d.q, q) < 1e-14);
    CHECK(d.chi.max_abs() < 1e-15);
    CHECK(d.phi.max_abs() < 1e-15);
    CHECK(d.vbar_u.max_abs() < 1e-15);
  }
  // a state with chi = phi = vbar = 0 is geostrophic
  const PrimitiveState W = random_state(g, 9, 0.3);
  QGDecomposition d = decompose(W);
  d.chi.set_zero();
  d.phi.set_zero();
  d.vbar_u.set_zero();
  d.vbar_v.set_zero();
  CHECK(state_rel_diff(reconstruct(d).W, geostrophic_state(d.q)) < 1e-14);
}

TEST_CASE("parity violations are rejected") {
  const Grid g = Grid::cube(8);
  PrimitiveState W = random_state(g, 1, 0.2);
  W.u.at(IVec3{1, 0, 1}) += 0.3;
  W.u.at(IVec3{-1, 0, -1}) += 0.3;
  CHECK_THROWS_AS(decompose(W), Error);
  // even content in rho
  PrimitiveState V = random_state(g, 1, 0.2);
  V.rho += cos_mode(g, IVec3{1, 1, 1});
  CHECK_THROWS_AS(decompose(V), Error);
}

TEST_CASE("barotropic divergence is rejected") {
  const Grid g = Grid::cube(8);
  PrimitiveState W = PrimitiveState::zero(g);
  W.u = cos_mode(g, IVec3{1, 0, 0}, Parity::even);
  CHECK_THROWS_AS(check_state(W), Error);
  remove_barotropic_divergence(W.u, W.v);
  CHECK_NOTHROW(check_state(W));
}

TEST_CASE("forcing transform of a z-only shear") {
  const Grid g = Grid::cube(8);
  const SpectralField fu = cos_mode(g, IVec3{0, 0, 1}, Parity::even);
  const ForcingSet f = derive_forcings(fu, SpectralField(g, Parity::even), SpectralField(g, Parity::odd));
  CHECK(f.f_q.max_abs() < 1e-15);
  CHECK(f.f_chi.max_abs() < 1e-15);
  CHECK(rel_diff(f.fbar_u, fu) < 1e-15);
  CHECK(f.fbar_v.max_abs() < 1e-15);
  CHECK(f.f_phi_zz.max_abs() < 1e-15);
  CHECK(zero_forcing(g).is_zero());
  CHECK(derive_forcings(SpectralField(g, Parity::even), SpectralField(g, Parity::even),
                        SpectralField(g, Parity::odd))
            .is_zero());
}

TEST_CASE("forcing transform against sampled analytic derivatives") {
  const Grid g = Grid::cube(8);
  // fu = cos(x+2y) cos z + sin(y) cos 2z, fv = sin(2x-y) cos 3z + cos x cos z,
  // frho = cos(x+y) sin z
  auto fu_fn = [](double x, double y, double z) {
    return std::cos(x + 2 * y) * std::cos(z) + std::sin(y) * std::cos(2 * z);
  };
  auto fv_fn = [](double x, double y, double z) {
    return std::sin(2 * x - y) * std::cos(3 * z) + std::cos(x) * std::cos(z);
  };
  auto fr_fn = [](double x, double y, double z) { return std::cos(x + y) * std::sin(z); };
  // f_q = d_x fv - d_y fu - d_z frho
  auto fq_fn = [](double x, double y, double z) {
    return 2 * std::cos(2 * x - y) * std::cos(3 * z) - std::sin(x) * std::cos(z) +
           2 * std::sin(x + 2 * y) * std::cos(z) - std::cos(y) * std::cos(2 * z) -
           std::cos(x + y) * std::cos(z);
  };
  // div f_v = d_x fu + d_y fv
  auto div_fn = [](double x, double y, double z) {
    return -std::sin(x + 2 * y) * std::cos(z) - std::cos(2 * x - y) * std::cos(3 * z);
  };
  const SpectralField fu = sampled(g, Parity::even, fu_fn);
  const SpectralField fv = sampled(g, Parity::even, fv_fn);
  const SpectralField fr = sampled(g, Parity::odd, fr_fn);
  const ForcingSet f = derive_forcings(fu, fv, fr);
  CHECK(max_abs_diff(f.f_q, sampled(g, Parity::even, fq_fn)) < 1e-12);
  // Delta2 f_chi = div f_v, and div f_v has no horizontal mean here
  CHECK(max_abs_diff(laplacian2(f.f_chi), sampled(g, Parity::even, div_fn)) < 1e-12);
  CHECK(f.fbar_u.max_abs() < 1e-15);
  CHECK(f.fbar_v.max_abs() < 1e-15);
  // d_zz f_phi = Delta2^{-1} d_zz curl f_v + P_z d_z f_rho
  const SpectralField expect = inv_laplacian2(dzz(sampled(g, Parity::even, fq_fn) + dz(fr))) +
                               pz_project(dz(fr));
  CHECK(max_abs_diff(f.f_phi_zz, expect) < 1e-12);
}

TEST_CASE("forcing parity is checked") {
  const Grid g = Grid::cube(8);
  const SpectralField even = parity_project(cos_mode(g, IVec3{1, 0, 1}), Parity::even);
  const SpectralField zero(g, Parity::even);
  CHECK_THROWS_AS(derive_forcings(zero, zero, even), Error);
  CHECK_THROWS_AS(derive_forcings(zero, blab::dz(even), SpectralField(g, Parity::odd)), Error);
  CHECK_NOTHROW(derive_forcings(even, zero, blab::dz(even)));
}
