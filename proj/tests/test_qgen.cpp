/// @file test_qgen.cpp
/// @brief Slow equation: right-hand side and time stepping.
///
/// Oracle for n = 0: a separately written scalar QG stepper (streamfunction
/// from a direct mode loop, Jacobian on the grid, its own Lawson RK4).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>

#include "blab/fft.hpp"
#include "blab/initial_data.hpp"
#include "blab/norms.hpp"
#include "blab/operators.hpp"
#include "blab/qgen.hpp"
#include "test_support.hpp"

using namespace blab;
using blab::test::rel_diff;

namespace {

/// Reference classical truncated QGE.
struct ScalarQG {
  const Grid& g;
  double mu, kappa;
  SpectralField fq;

  double k2(std::size_t i) const {
    const IVec3 k = g.k_of(i);
    const double a = g.kprime(0, k[0]), b = g.kprime(1, k[1]), c = g.kprime(2, k[2]);
    return a * a + b * b + c * c;
  }
  SpectralField nonlinear(const SpectralField& q) const {
    SpectralField psi(g, Parity::even);
    for (std::size_t i = 0; i < q.size(); ++i)
      if (k2(i) > 0) psi.coeffs()[i] = -q.coeffs()[i] / k2(i);
    const SpectralField u = dy(psi) * -1.0, v = dx(psi);
    // Jacobian sampled pointwise on the padded grid
    const Shape M = product_shape(g);
    const std::vector<double> pu = to_physical(u, M), pv = to_physical(v, M);
    const std::vector<double> qx = to_physical(dx(q), M), qy = to_physical(dy(q), M);
    std::vector<double> j(pu.size());
    for (std::size_t i = 0; i < j.size(); ++i) j[i] = pu[i] * qx[i] + pv[i] * qy[i];
    return low_pass(fq - from_physical(j, M, g, Parity::even), kappa);
  }
  SpectralField E(SpectralField q, double h) const {
    for (std::size_t i = 0; i < q.size(); ++i) q.coeffs()[i] *= std::exp(-mu * k2(i) * h);
    return q;
  }
  SpectralField step(const SpectralField& q, double h) const {
    const SpectralField a = nonlinear(q);
    const SpectralField b = nonlinear(E(q + a * (h / 2), h / 2));
    const SpectralField c = nonlinear(E(q, h / 2) + b * (h / 2));
    const SpectralField d = nonlinear(E(q, h) + E(c, h / 2) * h);
    return E(q, h) + (E(a, h) + E(b + c, h / 2) * 2.0 + d) * (h / 6);
  }
};

SpectralField slow_random(const Grid& g, double kappa, std::uint64_t seed, double amp) {
  SpectralField q = low_pass(random_field(g, seed, Parity::even, 0.3), kappa);
  q *= amp / l2_norm(q);
  return q;
}

}  // namespace

TEST_CASE("qgen_rhs trivial cases") {
  const Grid g = Grid::cube(12);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const SpectralField zq = slow_initial_data("zonal", g, 1.0);
  for (int n = 0; n <= sch.n_star; ++n)
    CHECK(rel_diff(qgen_rhs(zq, sch, zero_forcing(g), n), laplacian3(zq) * sch.mu) < 1e-14);
  const ForcingSet f = derive_forcings(low_pass(random_field(g, 1, Parity::even, 0.4), sch.kappa),
                                       low_pass(random_field(g, 2, Parity::even, 0.4), sch.kappa),
                                       low_pass(random_field(g, 3, Parity::odd, 0.4), sch.kappa));
  CHECK(rel_diff(qgen_rhs(SpectralField(g, Parity::even), sch, f, 0), low_pass(f.f_q, sch.kappa)) < 1e-14);
  // from level 1 on the forced slaved fields interact with each other
  CHECK(rel_diff(qgen_rhs(SpectralField(g, Parity::even), sch, f, 1), low_pass(f.f_q, sch.kappa)) > 0);
  CHECK_THROWS_AS(qgen_rhs(zq, sch, f, sch.n_star + 1), Error);
}

TEST_CASE("n = 0 trajectory matches an independent QG stepper") {
  const Grid g = Grid::cube(16);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const SpectralField q0 = slow_random(g, sch.kappa, 4, 2.0);
  const ForcingSet f = derive_forcings(low_pass(random_field(g, 5, Parity::even, 0.4, 0.5), sch.kappa),
                                       low_pass(random_field(g, 6, Parity::even, 0.4, 0.5), sch.kappa),
                                       low_pass(random_field(g, 7, Parity::odd, 0.4, 0.5), sch.kappa));
  QgenConfig cfg;
  cfg.n = 0;
  cfg.dt = 0.02;
  cfg.t_end = 0.5;
  std::vector<SpectralField> snaps;
  const QgenTrajectory tr = integrate_qgen(q0, sch, cfg, f, [&](double, const SpectralField& q) {
    snaps.push_back(q);
  });
  REQUIRE(snaps.size() == 26);
  const ScalarQG ref{g, sch.mu, sch.kappa, f.f_q};
  SpectralField q = q0;
  double worst = 0;
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    q = ref.step(q, 0.02);
    worst = std::max(worst, rel_diff(snaps[i], q));
  }
  MESSAGE("max relative deviation " << worst);
  CHECK(worst < 1e-12);
  CHECK(rel_diff(tr.final_q, q) < 1e-12);
  CHECK(l2_distance(q, q0) > 0.01 * l2_norm(q0));
}

TEST_CASE("zonal state decays mode by mode") {
  const Grid g = Grid::cube(12);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const SpectralField q0 = slow_initial_data("zonal", g, 1.0);
  QgenConfig cfg;
  cfg.dt = 0.1;
  cfg.t_end = 2.0;
  const QgenTrajectory tr = integrate_qgen(q0, sch, cfg, zero_forcing(g));
  SpectralField expect = q0;
  for (std::size_t i = 0; i < expect.size(); ++i) {
    const IVec3 k = g.k_of(i);
    const double a = g.kprime(0, k[0]), c = g.kprime(2, k[2]);
    expect.coeffs()[i] *= std::exp(-sch.mu * (a * a + c * c) * 2.0);
  }
  CHECK(rel_diff(tr.final_q, expect) < 1e-10);
}

TEST_CASE("f = 0 energy does not increase and the band is invariant") {
  const Grid g = Grid::cube(16);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  QgenConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 1.0;
  for (int n : {0, 2}) {
    cfg.n = n;
    bool band = true;
    const QgenTrajectory tr = integrate_qgen(slow_random(g, sch.kappa, 9, 2.0), sch, cfg, zero_forcing(g),
                                             [&](double, const SpectralField& q) {
                                               band = band && high_pass(q, sch.kappa).max_abs() == 0.0;
                                             });
    CHECK(band);
    CHECK(tr.bound_ok);
    if (n == 0)
      for (std::size_t i = 1; i < tr.rows.size(); ++i) CHECK(tr.rows[i].energy <= tr.rows[i - 1].energy);
  }
}

TEST_CASE("slow energy is the geostrophic energy") {
  const Grid g = Grid::cube(12);
  const SpectralField q = low_pass(random_field(g, 3, Parity::even, 0.3), 3.1);
  CHECK(slow_energy(q) == doctest::Approx(energy(geostrophic_state(q))).epsilon(1e-13));
}

TEST_CASE("n = 0 and n = 1 differ by O(eps)") {
  const Grid g = Grid::cube(16);
  QgenConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 1.0;
  std::vector<double> gap;
  // one band for both so that only eps changes
  for (double eps : {0.05, 0.025, 0.0125}) {
    const Schedule sch = with_kappa(make_schedule(eps, 0.5, 0.05), 2.2);
    REQUIRE(sch.n_star >= 1);
    const SpectralField q0 = slow_initial_data("dipole", g, 1.0);
    cfg.n = 0;
    const SpectralField a = integrate_qgen(q0, sch, cfg, zero_forcing(g)).final_q;
    cfg.n = 1;
    const SpectralField b = integrate_qgen(q0, sch, cfg, zero_forcing(g)).final_q;
    gap.push_back(l2_distance(a, b) / l2_norm(a));
    MESSAGE("eps=" << eps << " relative gap " << gap.back());
  }
  CHECK(gap[0] > 0);
  CHECK(gap[0] < 0.05);
  CHECK(gap[0] / gap[1] == doctest::Approx(2.0).epsilon(0.1));
  CHECK(gap[1] / gap[2] == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("qgen csv and argument checks") {
  const Grid g = Grid::cube(12);
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  QgenConfig cfg;
  cfg.dt = 0;
  CHECK_THROWS_AS(integrate_qgen(slow_initial_data("dipole", g, 1.0), sch, cfg, zero_forcing(g)), Error);
  cfg.dt = 0.1;
  CHECK_THROWS_AS(integrate_qgen(random_field(g, 1, Parity::even, 0.2), sch, cfg, zero_forcing(g)), Error);
  cfg.t_end = 0.3;
  const auto tr = integrate_qgen(slow_initial_data("dipole", g, 1.0), sch, cfg, zero_forcing(g));
  const std::string path = "qgen_test.csv";
  write_qgen_csv(path, tr.rows);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,q_l2,q_s,energy");
  int lines = 0;
  for (std::string s; std::getline(in, s);) ++lines;
  CHECK(lines == 4);
  std::remove(path.c_str());
}
