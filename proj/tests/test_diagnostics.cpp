/// @file test_diagnostics.cpp
/// @brief Residuals, error norms, spectral fits and mode splits.
///
/// Oracles: the level-0 residuals written with grid operators, the two
/// residual forms against each other, quadrature on the physical grid and
/// synthesized spectra with known decay.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "blab/diagnostics.hpp"
#include "blab/fft.hpp"
#include "blab/initial_data.hpp"
#include "blab/norms.hpp"
#include "blab/operators.hpp"
#include "blab/pe_solver.hpp"
#include "test_support.hpp"

using namespace blab;
using blab::test::cos_mode;
using blab::test::rel_diff;

namespace {

ForcingSet band_forcing(const Grid& g, double kappa, std::uint64_t seed, double amp) {
  return derive_forcings(low_pass(random_field(g, seed, Parity::even, 0.4, amp), kappa),
                         low_pass(random_field(g, seed + 1, Parity::even, 0.4, amp), kappa),
                         low_pass(random_field(g, seed + 2, Parity::odd, 0.4, amp), kappa));
}

BalanceOptions mode(BalanceOptions::Mode m) {
  BalanceOptions o;
  o.mode = m;
  return o;
}

BalanceRun run_levels(const SpectralField& q, const Schedule& sch, const ForcingSet& f, int L,
                      BalanceOptions::Mode m = BalanceOptions::Mode::numeric) {
  return compute_levels(make_balance_context(q.grid(), sch, f, L, mode(m)), q, L);
}

SpectralField field_exp(const Grid& g, double a) {
  SpectralField f(g, Parity::none);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double kn = std::sqrt(static_cast<double>(knorm2(g.k_of(i))));
    f.coeffs()[i] = std::exp(-a * kn);
  }
  return f;
}

}  // namespace

TEST_CASE("level-0 residual of a zonal state under a shear forcing") {
  const Grid g = Grid::cube(12);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const SpectralField q = slow_initial_data("zonal", g, 1.0);
  const ForcingSet f = derive_forcings(cos_mode(g, {0, 0, 1}, Parity::even), SpectralField(g, Parity::even),
                                       SpectralField(g, Parity::odd));
  const BalanceRun run = run_levels(q, sch, f, 1);
  const SpectralField sinz = dz(cos_mode(g, {0, 0, 1}, Parity::even)) * -1.0;
  for (const ResidualTriple& r :
       {residual_from_levels(run.levels[0], run.levels[1], sch), residuals(run)[0], residual_direct(run, 0)}) {
    CHECK(rel_diff(r.r_vbar_u, sinz) < 1e-14);
    CHECK(l2_norm(r.r_vbar_v) < 1e-15);
    CHECK(l2_norm(r.r_chi) == 0.0);
    CHECK(l2_norm(r.r_phi) == 0.0);
    CHECK(r.vbar_0 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  }
}

TEST_CASE("level-0 residuals match the grid formulas") {
  const Grid g = Grid::cube(16);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const double kap = sch.kappa;
  SpectralField q = low_pass(random_field(g, 3, Parity::even, 0.3), kap);
  const ForcingSet f = band_forcing(g, kap, 9, 0.4);
  const ResidualTriple r = residuals(run_levels(q, sch, f, 1))[0];

  const PrimitiveState v0 = geostrophic_state(q);
  const Advection N = advect(v0.u, v0.v, SpectralField(g, Parity::odd), v0.rho);
  auto P = [&](const SpectralField& x) { return low_pass(x, kap); };
  auto interior = [](SpectralField x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const IVec3 k = x.grid().k_of(i);
      if (k[2] == 0 || (k[0] == 0 && k[1] == 0)) x.coeffs()[i] = 0;
    }
    return x;
  };
  const SpectralField rv_u = dz(P(xy_average(N.nu) - f.fbar_u));
  const SpectralField rv_v = dz(P(xy_average(N.nv) - f.fbar_v));
  const SpectralField rc = interior(laplacian3(P(inv_laplacian2(div2(N.nu, N.nv)) - f.f_chi)));
  const SpectralField rp = interior(
      P(dzz(inv_laplacian2(curl2(N.nu, N.nv))) + pz_project(dz(N.nrho)) - f.f_phi_zz));
  CHECK(rel_diff(r.r_vbar_u, rv_u) < 1e-11);
  CHECK(rel_diff(r.r_vbar_v, rv_v) < 1e-11);
  CHECK(rel_diff(r.r_chi, rc) < 1e-11);
  CHECK(rel_diff(r.r_phi, rp) < 1e-11);
  CHECK(r.aggregate_s() > 0);
}

TEST_CASE("q = 0 and f = 0 give zero residuals") {
  const Grid g = Grid::cube(12);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const BalanceRun run = run_levels(SpectralField(g, Parity::even), sch, zero_forcing(g), sch.n_star + 1);
  for (const ResidualTriple& r : residuals(run)) CHECK(r.aggregate_s() == 0.0);
  CHECK(residual_direct(run, 1).aggregate_0() == 0.0);
}

TEST_CASE("residual levels must be consecutive") {
  const Grid g = Grid::cube(12);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const BalanceRun run = run_levels(slow_initial_data("dipole", g, 1.0), sch, zero_forcing(g), 2);
  CHECK_THROWS_AS(residual_from_levels(run.levels[0], run.levels[2], sch), Error);
  CHECK_THROWS_AS(dual_residual_check(run, 2), Error);
}

TEST_CASE("series and grid level differences agree") {
  const Grid g = Grid::cube(16);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const BalanceRun run = run_levels(slow_initial_data("dipole", g, 1.0), sch, band_forcing(g, sch.kappa, 4, 0.2),
                                    sch.n_star + 1);
  const std::vector<ResidualTriple> rs = residuals(run);
  REQUIRE(rs.size() == static_cast<std::size_t>(sch.n_star + 1));
  for (int n = 0; n <= sch.n_star; ++n) {
    const ResidualTriple a = residual_from_levels(run.levels[n], run.levels[n + 1], sch);
    CHECK(std::abs(a.aggregate_s() - rs[n].aggregate_s()) <= 1e-9 * rs[n].aggregate_s());
  }
}

TEST_CASE("direct and difference residuals agree, numeric and formal") {
  const Grid g = Grid::cube(16);
  for (double eps : {1e-2, 1e-3}) {
    const Schedule sch = make_schedule(eps, 0.5, 0.05);
    const SpectralField q = low_pass(random_field(g, 8, Parity::even, 0.3), sch.kappa);
    const ForcingSet f = band_forcing(g, sch.kappa, 12, 0.3);
    for (auto m : {BalanceOptions::Mode::numeric, BalanceOptions::Mode::formal}) {
      const BalanceRun run = run_levels(q, sch, f, sch.n_star + 1, m);
      for (int n = 0; n <= sch.n_star; ++n) {
        const DualReport d = dual_residual_check(run, n);
        CHECK(d.max_rel <= 1e-9);
        // values: the direct form cancels terms of the size of the level-0
        // residual, so its roundoff is measured on that scale
        const ResidualTriple a = residuals(run)[n], b = residual_direct(run, n);
        const double scale = std::max(a.aggregate_s(), 1e-5 * residuals(run)[0].aggregate_s());
        CHECK(std::abs(a.aggregate_s() - b.aggregate_s()) <= 1e-9 * scale);
      }
    }
  }
}

TEST_CASE("formal differences vanish below order n + 1") {
  const Grid g = Grid::cube(16);
  const Schedule sch = make_schedule(1e-3, 0.5, 0.05);
  const BalanceRun run = run_levels(slow_initial_data("dipole", g, 1.0), sch, zero_forcing(g), sch.n_star + 1,
                                    BalanceOptions::Mode::formal);
  for (int n = 0; n <= sch.n_star; ++n) {
    const BandPoly d = run.jets[n + 1].phi - run.jets[n].phi;
    for (int j = 0; j <= n; ++j)
      for (cplx c : coefficient(d, 0, j)) CHECK(c == cplx(0.0));
  }
}

TEST_CASE("zonal state under a shear forcing: chi and phi residuals vanish") {
  const Grid g = Grid::cube(16);
  const Schedule sch = make_schedule(1e-3, 0.5, 0.05);
  const SpectralField q = slow_initial_data("zonal", g, 1.0);
  {
    const BalanceRun run = run_levels(q, sch, zero_forcing(g), sch.n_star + 1);
    for (const ResidualTriple& r : residuals(run)) CHECK(r.aggregate_0() == 0.0);
  }
  // the forced shear stays along y for levels 0 and 1; diffusion turns
  // part of it into x at level 2, which then advects the zonal state
  const SpectralField shear = cos_mode(g, {0, 0, 1}, Parity::even) + cos_mode(g, {0, 0, 2}, Parity::even) * 0.3;
  const ForcingSet f = derive_forcings(shear, SpectralField(g, Parity::even), SpectralField(g, Parity::odd));
  const BalanceRun run = run_levels(q, sch, f, sch.n_star + 1);
  const std::vector<ResidualTriple> rs = residuals(run);
  for (int n = 0; n <= 1; ++n) {
    CHECK(rs[n].chi_0 == 0.0);
    CHECK(rs[n].phi_0 == 0.0);
    CHECK(rs[n].vbar_0 > 0);
  }
  CHECK(rs[2].phi_0 > 0);
}

TEST_CASE("residual decays with n at small eps") {
  const Grid g = Grid::cube(16);
  const Schedule sch = make_schedule(1e-3, 0.5, 0.05);
  const BalanceRun run = run_levels(slow_initial_data("dipole", g, 1.0), sch, zero_forcing(g), sch.n_star + 1,
                                    BalanceOptions::Mode::formal);
  const std::vector<ResidualTriple> rs = residuals(run);
  for (int n = 0; n < sch.n_star; ++n) CHECK(rs[n + 1].aggregate_s() < rs[n].aggregate_s());
}

TEST_CASE("balance_error against quadrature") {
  const Grid g = Grid::cube(12);
  const PrimitiveState W = random_state(g, 5), Ws = random_state(g, 6);
  CHECK(balance_error(W, W).combined == 0.0);
  const ErrorReport z = balance_error(W, PrimitiveState::zero(g), 0.5);
  CHECK(z.t == 0.5);
  CHECK(z.err_rho == doctest::Approx(l2_norm(W.rho)).epsilon(1e-15));
  CHECK(z.err_v == doctest::Approx(std::hypot(l2_norm(W.u), l2_norm(W.v))).epsilon(1e-15));

  auto mean_sq = [](const SpectralField& a, const SpectralField& b) {
    const std::vector<double> x = to_physical(a), y = to_physical(b);
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return s / x.size();
  };
  const double ev = std::sqrt(mean_sq(W.u, Ws.u) + mean_sq(W.v, Ws.v));
  const double er = std::sqrt(mean_sq(W.rho, Ws.rho));
  const ErrorReport e = balance_error(W, Ws);
  CHECK(std::abs(e.err_v - ev) <= 1e-12 * ev);
  CHECK(std::abs(e.err_rho - er) <= 1e-12 * er);
  CHECK(std::abs(e.combined - std::hypot(ev, er)) <= 1e-12 * e.combined);
}

TEST_CASE("gevrey fit of synthetic spectra") {
  const Grid g = Grid::cube(24);
  const GevreyFit a = gevrey_fit(field_exp(g, 0.8));
  CHECK(a.reliable);
  CHECK(a.sigma == doctest::Approx(0.8).epsilon(0.02));
  CHECK(a.amplitude == doctest::Approx(1.0).epsilon(1e-6));
  const GevreyFit w = gevrey_fit(field_exp(g, 0.0));
  CHECK(w.reliable);
  CHECK(std::abs(w.sigma) < 1e-12);
  const GevreyFit s = gevrey_fit(cos_mode(g, {1, 2, 0}));
  CHECK_FALSE(s.reliable);
  // coefficients below the floor are ignored
  const GevreyFit f = gevrey_fit(field_exp(g, 3.0), 1e-14);
  CHECK(f.shells < 12);
  CHECK(f.sigma == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("mode_split parts and tail bound") {
  const Grid g = Grid::cube(16);
  const SpectralField f = random_field(g, 11, Parity::even, 0.3);
  const ModeSplit m = mode_split(f, 3.2);
  const double a = l2_norm(f), b = l2_norm(m.low), c = l2_norm(m.high);
  CHECK(std::abs(a * a - b * b - c * c) <= 1e-13 * a * a);
  CHECK(std::abs(inner(m.low, m.high)) <= 1e-15 * a * a);
  CHECK(rel_diff(m.low + m.high, f) == 0.0);
  CHECK(mode_split(m.low, 3.2).l2_high == 0.0);

  const SpectralField e = field_exp(g, 0.9);
  for (double kappa : {2.0, 3.5, 6.0})
    for (double sigma : {0.3, 0.6, 0.85}) {
      const ModeSplit s = mode_split(e, kappa, sigma);
      CHECK(std::isfinite(s.tail_bound));
      CHECK(s.bound_ok);
      CHECK(s.l2_high <= s.tail_bound);
    }
}

TEST_CASE("diagnostics csv schema") {
  std::ostringstream os;
  DiagnosticsRow r;
  r.run_id = "x";
  r.eps = 0.01;
  r.n = 2;
  r.combined = 1.5;
  append_diagnostics_row(os, r);
  CHECK(std::string(diagnostics_csv_header()) ==
        "run_id,eps,n,t,err_v,err_rho,combined,res_vbar,res_chi,res_phi,res_aggregate_s,sigma_fit,energy,"
        "parity_error");
  CHECK(os.str() == "x,0.01,2,0,nan,nan,1.5,nan,nan,nan,nan,nan,nan,nan\n");
}
