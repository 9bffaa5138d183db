/// @file test_balance.cpp
/// @brief Slaving hierarchy: level formulas, fixed points, tangents, jets.
///
/// Oracles: level 1 written out by hand with grid operators, the level-0
/// identity curl(v.grad v) - d_z(v.grad rho) = v.grad q, central finite
/// differences, and direct series multiplication for the jet algebra.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "blab/balance.hpp"
#include "blab/fft.hpp"
#include "blab/initial_data.hpp"
#include "blab/pe_solver.hpp"
#include "test_support.hpp"

using namespace blab;
using blab::test::rel_diff;
using blab::test::state_norm;
using blab::test::state_rel_diff;

namespace {

ForcingSet band_forcing(const Grid& g, double kappa, std::uint64_t seed, double amp) {
  return derive_forcings(low_pass(random_field(g, seed, Parity::even, 0.4, amp), kappa),
                         low_pass(random_field(g, seed + 1, Parity::even, 0.4, amp), kappa),
                         low_pass(random_field(g, seed + 2, Parity::odd, 0.4, amp), kappa));
}

SpectralField slow_random(const Grid& g, double kappa, std::uint64_t seed, double amp) {
  SpectralField q = low_pass(random_field(g, seed, Parity::even, 0.3, 1.0), kappa);
  q *= amp / l2_norm(q);
  return q;
}

BalanceOptions numeric() {
  BalanceOptions o;
  o.mode = BalanceOptions::Mode::numeric;
  return o;
}

double level_diff(const BalanceSet& a, const BalanceSet& b) {
  return l2_distance(a.vbar_u, b.vbar_u) + l2_distance(a.vbar_v, b.vbar_v) + l2_distance(a.X, b.X) +
         l2_distance(a.Phi, b.Phi);
}

double level_norm(const BalanceSet& a) {
  return l2_norm(a.vbar_u) + l2_norm(a.vbar_v) + l2_norm(a.X) + l2_norm(a.Phi);
}

}  // namespace

TEST_CASE("jet layouts and series products") {
  const LayoutPtr l = jet_layout(2, 0b01, 3, true);
  // direction 0 weighted: counts 4, 3 (S={0}), 4 (S={1}), 3 (S={0,1})
  CHECK(l->count[0] == 4);
  CHECK(l->count[1] == 3);
  CHECK(l->count[2] == 4);
  CHECK(l->count[3] == 3);
  CHECK(l->ncomp == 14);
  const LayoutPtr n = numeric_layout(3);
  CHECK(n->ncomp == 8);
  CHECK(n->pairs.size() == 27);  // 3^3 subset splits

  // (a0 + a1 eps + e0 b) * (c0 + e1 d): check against hand expansion
  PhysPoly a(l, 1), b(l, 1), out(l, 1);
  a.comp(l->comp(0, 0))[0] = 2;
  a.comp(l->comp(0, 1))[0] = 3;
  a.comp(l->comp(1, 0))[0] = 5;
  b.comp(l->comp(0, 0))[0] = 7;
  b.comp(l->comp(2, 0))[0] = 11;
  jet_mul_acc(out, a, b);
  CHECK(out.comp(l->comp(0, 0))[0] == 14);
  CHECK(out.comp(l->comp(0, 1))[0] == 21);
  CHECK(out.comp(l->comp(1, 0))[0] == 35);
  CHECK(out.comp(l->comp(2, 0))[0] == 22);
  CHECK(out.comp(l->comp(2, 1))[0] == 33);
  CHECK(out.comp(l->comp(3, 0))[0] == 55);
  CHECK(out.comp(l->comp(0, 2))[0] == 0);
}

TEST_CASE("parallel and serial jet products agree bitwise") {
  const LayoutPtr l = jet_layout(3, 0b011, 4, true);
  const std::size_t n = 3001;
  PhysPoly a(l, n), b(l, n), x(l, n), y(l, n);
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    a.data[i] = std::sin(0.37 * i + 1);
    b.data[i] = std::cos(0.11 * i * i);
  }
  jet_mul_acc(x, a, b);
  serial::jet_mul_acc(y, a, b);
  CHECK(x.data == y.data);
}

TEST_CASE("band transforms reproduce grid products") {
  const Grid g = Grid::cube(12);
  const double kappa = 3.5;
  const BandSpace s(g, kappa);
  const SpectralField f = low_pass(random_field(g, 1, Parity::even, 0.2), kappa);
  const SpectralField h = low_pass(random_field(g, 2, Parity::odd, 0.2), kappa);
  const LayoutPtr l = numeric_layout(0);
  PhysPoly acc(l, s.phys_size());
  jet_mul_acc(acc, to_phys(BandPoly::constant(s, l, s.restrict(f))),
              to_phys(BandPoly::constant(s, l, s.restrict(h))));
  const SpectralField prod = s.expand(evaluate(from_phys(acc, s), 0.0), Parity::odd);
  CHECK(rel_diff(prod, low_pass(multiply(f, h), kappa)) < 1e-13);
}

TEST_CASE("level 0 is zero and q = 0 gives zero levels") {
  const Grid g = Grid::cube(12);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const BalanceRun run = iterate_balance(SpectralField(g, Parity::even), sch, zero_forcing(g), sch.n_star);
  for (const BalanceSet& b : run.levels) CHECK(level_norm(b) == 0.0);
  const BalanceRun r2 = iterate_balance(slow_random(g, sch.kappa, 3, 1.0), sch, zero_forcing(g), 0);
  CHECK(level_norm(r2.levels[0]) == 0.0);
}

TEST_CASE("slow state requirements are enforced") {
  const Grid g = Grid::cube(12);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  CHECK_THROWS_AS(iterate_balance(random_field(g, 1, Parity::even, 0.2), sch, zero_forcing(g), 1), Error);
  CHECK_THROWS_AS(iterate_balance(SpectralField(g, Parity::even), sch, zero_forcing(g), sch.n_star + 1),
                  Error);
  const Schedule big = make_schedule(1e-4, 0.5, 0.05);  // kappa = 10
  CHECK_THROWS_AS(iterate_balance(SpectralField(g, Parity::even), big, zero_forcing(g), 1), Error);
}

TEST_CASE("G at level 0 equals mu Delta q + f_q - P<[v0.grad q]") {
  const Grid g = Grid::cube(16);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const SpectralField q = slow_random(g, sch.kappa, 7, 1.0);
  const ForcingSet f = band_forcing(g, sch.kappa, 40, 0.3);
  const PrimitiveState v0 = geostrophic_state(q);
  const SpectralField adv = low_pass(multiply(v0.u, dx(q)) + multiply(v0.v, dy(q)), sch.kappa);
  const SpectralField expect = laplacian3(q) * sch.mu + low_pass(f.f_q, sch.kappa) - adv;
  const SpectralField got = g_slow(q, sch, f, 0);
  CHECK(rel_diff(got, expect) < 1e-10);
}

TEST_CASE("g_slow of a zonal state and of q = 0") {
  const Grid g = Grid::cube(12);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const SpectralField q = slow_initial_data("zonal", g, 1.0);
  CHECK(rel_diff(g_slow(q, sch, zero_forcing(g), 0), laplacian3(q) * sch.mu) < 1e-14);
  const ForcingSet f = band_forcing(g, sch.kappa, 4, 0.5);
  CHECK(rel_diff(g_slow(SpectralField(g, Parity::even), sch, f, 0), low_pass(f.f_q, sch.kappa)) < 1e-14);
}

TEST_CASE("level 1 matches the hand-unrolled formulas") {
  const Grid g = Grid::cube(16);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const double eps = sch.eps, kap = sch.kappa;
  const SpectralField q = slow_initial_data("dipole", g, 1.0);
  const ForcingSet f = band_forcing(g, kap, 70, 0.3);
  const BalanceRun run = iterate_balance(q, sch, f, 1);
  const BalanceSet& b = run.levels[1];

  const PrimitiveState v0 = geostrophic_state(q);
  const Advection N = advect(v0.u, v0.v, SpectralField(g, Parity::odd), v0.rho);
  auto P = [&](const SpectralField& x) { return low_pass(x, kap); };
  // Phi^1 = eps P<[Delta2^{-1} div N - f_chi]
  const SpectralField phi1 = P(inv_laplacian2(div2(N.nu, N.nv)) - f.f_chi) * eps;
  // vbar^1 = eps (-(mean N_v - fbar_v), mean N_u - fbar_u)
  const SpectralField vu1 = P(xy_average(N.nv) - f.fbar_v) * (-eps);
  const SpectralField vv1 = P(xy_average(N.nu) - f.fbar_u) * eps;
  // Delta3 X^1 = -eps P<[d_zz Delta2^{-1} curl N + P_z d_z N_rho - d_zz f_phi]
  const SpectralField x1 = inv_laplacian3(P(dzz(inv_laplacian2(curl2(N.nu, N.nv))) +
                                            pz_project(dz(N.nrho)) - f.f_phi_zz)) *
                           (-eps);
  auto interior = [](SpectralField x) {
    for (std::size_t i = 0; i < x.coeffs().size(); ++i) {
      const IVec3 k = x.grid().k_of(i);
      if (k[2] == 0 || (k[0] == 0 && k[1] == 0)) x.coeffs()[i] = 0;
    }
    return x;
  };
  CHECK(rel_diff(b.Phi, interior(phi1)) < 1e-10);
  CHECK(rel_diff(b.X, interior(x1)) < 1e-10);
  CHECK(rel_diff(b.vbar_u, vu1) < 1e-10);
  CHECK(rel_diff(b.vbar_v, vv1) < 1e-10);
  CHECK(l2_norm(b.Phi) > 0);
  CHECK(l2_norm(b.X) > 0);
}

TEST_CASE("zonal slow state is a fixed point of every level") {
  const Grid g = Grid::cube(16);
  const Schedule sch = make_schedule(1e-3, 0.5, 0.05);
  REQUIRE(sch.n_star == 4);
  const SpectralField q = slow_initial_data("zonal", g, 1.0);
  const BalanceRun run = iterate_balance(q, sch, zero_forcing(g), sch.n_star, numeric());
  for (const BalanceSet& b : run.levels) CHECK(level_norm(b) == 0.0);
}

TEST_CASE("slaving preserves the slow variable") {
  const Grid g = Grid::cube(16);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const SpectralField q = slow_random(g, sch.kappa, 9, 1.5);
  const ForcingSet f = band_forcing(g, sch.kappa, 12, 0.3);
  for (int n = 0; n <= sch.n_star; ++n) {
    const PrimitiveState W = well_prepared_init(q, sch, f, n);
    CHECK(rel_diff(decompose(W).q, q) < 1e-12);
    if (n == 0) CHECK(state_rel_diff(W, geostrophic_state(q)) < 1e-14);
  }
  CHECK(state_norm(well_prepared_init(SpectralField(g, Parity::even), sch, zero_forcing(g), 2)) == 0.0);
}

TEST_CASE("levels are band limited and parity correct") {
  const Grid g = Grid::cube(16);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const BalanceRun run =
      iterate_balance(slow_random(g, sch.kappa, 5, 1.0), sch, band_forcing(g, sch.kappa, 2, 0.3), 2);
  for (const BalanceSet& b : run.levels)
    for (const SpectralField* f : {&b.vbar_u, &b.vbar_v, &b.X, &b.Phi}) {
      CHECK(high_pass(*f, sch.kappa).max_abs() == 0.0);
      CHECK(parity_error(*f) < 1e-14 * std::max(1.0, f->max_abs()));
      CHECK(rel_diff(hermitian_project(*f), *f) < 1e-14);
    }
}

TEST_CASE("tangents match central differences and are linear") {
  const Grid g = Grid::cube(16);
  const Schedule sch = make_schedule(1e-3, 0.5, 0.05);
  const SpectralField q = slow_random(g, sch.kappa, 21, 1.0);
  const ForcingSet f = band_forcing(g, sch.kappa, 30, 0.2);
  const int nmax = 3;
  const double h = 1e-5;
  for (std::uint64_t dseed : {101, 102}) {
    const SpectralField d = slow_random(g, sch.kappa, dseed, 1.0);
    const auto tan = tangent_balance(q, d, sch, f, nmax, numeric());
    const auto tan2 = tangent_balance(q, d * 2.0, sch, f, nmax, numeric());
    const BalanceRun up = iterate_balance(q + d * h, sch, f, nmax, numeric());
    const BalanceRun dn = iterate_balance(q - d * h, sch, f, nmax, numeric());
    CHECK(level_norm({0, tan[0].dvbar_u, tan[0].dvbar_v, tan[0].dX, tan[0].dPhi}) == 0.0);
    for (int n = 1; n <= nmax; ++n) {
      const BalanceSet t{n, tan[n].dvbar_u, tan[n].dvbar_v, tan[n].dX, tan[n].dPhi};
      const BalanceSet t2{n, tan2[n].dvbar_u, tan2[n].dvbar_v, tan2[n].dX, tan2[n].dPhi};
      const BalanceSet& a = up.levels[n];
      const BalanceSet& b = dn.levels[n];
      const BalanceSet fd{n, (a.vbar_u - b.vbar_u) * (0.5 / h), (a.vbar_v - b.vbar_v) * (0.5 / h),
                          (a.X - b.X) * (0.5 / h), (a.Phi - b.Phi) * (0.5 / h)};
      const double err = level_diff(t, fd) / level_norm(t);
      MESSAGE("n=" << n << " fd relative error " << err);
      CHECK(err < 1e-6);
      BalanceSet half{n, t2.vbar_u * 0.5, t2.vbar_v * 0.5, t2.X * 0.5, t2.Phi * 0.5};
      CHECK(level_diff(half, t) <= 1e-12 * level_norm(t));
    }
  }
}

TEST_CASE("formal series evaluate to the numeric levels") {
  const Grid g = Grid::cube(16);
  const Schedule sch = make_schedule(1e-3, 0.5, 0.05);
  const SpectralField q = slow_random(g, sch.kappa, 23, 1.0);
  const ForcingSet f = band_forcing(g, sch.kappa, 31, 0.2);
  BalanceOptions formal;
  formal.mode = BalanceOptions::Mode::formal;
  formal.extra_orders = 3;
  const BalanceRun a = iterate_balance(q, sch, f, 3, formal);
  const BalanceRun b = iterate_balance(q, sch, f, 3, numeric());
  // U^n is a polynomial in eps; with P = n + 3 the truncation sits
  // beyond eps^4 relative to the leading order
  for (int n = 1; n <= 3; ++n) CHECK(level_diff(a.levels[n], b.levels[n]) < 1e-9 * level_norm(b.levels[n]));
}
