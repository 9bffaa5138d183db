#include "blab/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "blab/balance.hpp"
#include "blab/diagnostics.hpp"
#include "blab/initial_data.hpp"
#include "blab/norms.hpp"
#include "blab/pe_solver.hpp"
#include "blab/qgen.hpp"

namespace blab {

namespace {

using clock_type = std::chrono::steady_clock;

double since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

double sq(double x) { return x * x; }

double state_sq(const PrimitiveState& W) { return inner(W.u, W.u) + inner(W.v, W.v) + inner(W.rho, W.rho); }

double state_rel(const PrimitiveState& a, const PrimitiveState& b) {
  const double d = sq(l2_distance(a.u, b.u)) + sq(l2_distance(a.v, b.v)) + sq(l2_distance(a.rho, b.rho));
  const double s = std::max(state_sq(a), state_sq(b));
  return s == 0 ? std::sqrt(d) : std::sqrt(d / s);
}

/// Relative distance over a list of field pairs, each weighted by its size.
template <class... F>
double fields_rel(const F&... pairs) {
  double d = 0, s = 0;
  for (const auto& [x, y] : {pairs...}) {
    d += sq(l2_distance(*x, *y));
    s += std::max(inner(*x, *x), inner(*y, *y));
  }
  return s == 0 ? std::sqrt(d) : std::sqrt(d / s);
}

using FP = std::pair<const SpectralField*, const SpectralField*>;

double decomposition_rel(const QGDecomposition& a, const QGDecomposition& b) {
  return fields_rel(FP{&a.q, &b.q}, FP{&a.vbar_u, &b.vbar_u}, FP{&a.vbar_v, &b.vbar_v}, FP{&a.chi, &b.chi},
                    FP{&a.phi, &b.phi});
}

double qxf_rel(const QxfState& a, const QxfState& b) {
  return fields_rel(FP{&a.q, &b.q}, FP{&a.vz_u, &b.vz_u}, FP{&a.vz_v, &b.vz_v}, FP{&a.lap_chi, &b.lap_chi},
                    FP{&a.phi_zz, &b.phi_zz});
}

ForcingSet random_forcing(const Grid& g, std::uint64_t seed, double kappa = 0) {
  auto part = [&](std::uint64_t s, Parity p) {
    SpectralField f = random_field(g, s, p, 0.5, 0.3);
    return kappa > 0 ? low_pass(f, kappa) : f;
  };
  return derive_forcings(part(seed, Parity::even), part(seed + 1, Parity::even), part(seed + 2, Parity::odd));
}

SpectralField slow_random(const Grid& g, double kappa, std::uint64_t seed) {
  SpectralField q = low_pass(random_field(g, seed, Parity::even, 0.3), kappa);
  q *= 1.0 / l2_norm(q);
  return q;
}

BalanceOptions numeric() {
  BalanceOptions o;
  o.mode = BalanceOptions::Mode::numeric;
  return o;
}

double level_sum(const SpectralField& a, const SpectralField& b, const SpectralField& c, const SpectralField& d) {
  return std::sqrt(inner(a, a) + inner(b, b) + inner(c, c) + inner(d, d));
}

OracleResult finish(std::string name, double value, double tol, std::string detail, clock_type::time_point t0) {
  OracleResult r;
  r.name = std::move(name);
  r.value = value;
  r.tol = tol;
  r.pass = std::isfinite(value) && value <= tol;
  r.detail = std::move(detail);
  r.seconds = since(t0);
  return r;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

}  // namespace

OracleResult oracle_round_trip(int states, int N) {
  const auto t0 = clock_type::now();
  const Grid g = Grid::cube(N);
  double worst = 0;
  for (int i = 0; i < states; ++i) {
    const PrimitiveState W = random_state(g, 1000 + i, 0.3);
    const QGDecomposition d = decompose(W);
    const Reconstruction r = reconstruct(d);
    worst = std::max(worst, state_rel(r.W, W));
    worst = std::max(worst, decomposition_rel(decompose(r.W), d));
  }
  return finish("round trips", worst, 1e-12,
                std::to_string(states) + " states at " + std::to_string(N) + "^3, both compositions", t0);
}

OracleResult oracle_equivalence(int states, int N) {
  const auto t0 = clock_type::now();
  const Grid g = Grid::cube(N);
  const double eps_list[] = {1.0, 0.05, 1e-3};
  double worst = 0;
  for (int i = 0; i < states; ++i) {
    const Schedule sch = make_schedule(eps_list[i % 3], 0.5, 0.05);
    const PrimitiveState W = random_state(g, 2000 + i, 0.3);
    const ForcingSet f = random_forcing(g, 3000 + 3 * i);
    const QxfState a = to_qxf(decompose(rhs_primitive(W, sch, f)));
    const QxfState b = rhs_qxf(decompose(W), sch, f);
    worst = std::max(worst, qxf_rel(a, b));
  }
  return finish("formulation equivalence", worst, 1e-10,
                std::to_string(states) + " forced states at " + std::to_string(N) + "^3, eps in {1, 0.05, 1e-3}",
                t0);
}

OracleResult oracle_skew_energy(int states, int N) {
  const auto t0 = clock_type::now();
  const Grid g = Grid::cube(N);
  double worst = 0;
  for (double eps : {1.0, 1e-2, 1e-4}) {
    const Schedule sch = make_schedule(eps, 0.5, 0.05);
    for (int i = 0; i < states; ++i) {
      const PrimitiveState W = random_state(g, 4000 + i, 0.3);
      const PrimitiveState t = skew_tendency(W, sch);
      const double e = inner(W.u, t.u) + inner(W.v, t.v) + inner(W.rho, t.rho);
      worst = std::max(worst, std::abs(e) / state_sq(W));
    }
  }
  return finish("skew energy neutrality", worst, 1e-12,
                "|<W, skew W>| / |W|_0^2, " + std::to_string(states) + " states x eps in {1, 1e-2, 1e-4}", t0);
}

OracleResult oracle_tangent(int directions, int N) {
  const auto t0 = clock_type::now();
  const Grid g = Grid::cube(N);
  const Schedule sch = make_schedule(1e-3, 0.5, 0.05);
  const SpectralField q = slow_random(g, sch.kappa, 21);
  const ForcingSet f = random_forcing(g, 30, sch.kappa);
  const int nmax = 3;
  const double h = 1e-5;
  double worst = 0;
  for (int i = 0; i < directions; ++i) {
    const SpectralField d = slow_random(g, sch.kappa, 500 + i);
    const auto tan = tangent_balance(q, d, sch, f, nmax, numeric());
    const BalanceRun up = iterate_balance(q + d * h, sch, f, nmax, numeric());
    const BalanceRun dn = iterate_balance(q - d * h, sch, f, nmax, numeric());
    for (int n = 1; n <= nmax; ++n) {
      const BalanceSet& a = up.levels[n];
      const BalanceSet& b = dn.levels[n];
      const double s = 0.5 / h;
      const SpectralField eu = (a.vbar_u - b.vbar_u) * s - tan[n].dvbar_u;
      const SpectralField ev = (a.vbar_v - b.vbar_v) * s - tan[n].dvbar_v;
      const SpectralField ex = (a.X - b.X) * s - tan[n].dX;
      const SpectralField ep = (a.Phi - b.Phi) * s - tan[n].dPhi;
      const double norm = level_sum(tan[n].dvbar_u, tan[n].dvbar_v, tan[n].dX, tan[n].dPhi);
      worst = std::max(worst, level_sum(eu, ev, ex, ep) / norm);
    }
  }
  return finish("tangent vs central differences", worst, 1e-6,
                std::to_string(directions) + " directions, " + std::to_string(N) + "^3, eps=1e-3, n<=3, h=1e-5",
                t0);
}

OracleResult oracle_dual(double eps, int N) {
  const auto t0 = clock_type::now();
  const Grid g = Grid::cube(N);
  const Schedule sch = make_schedule(eps, 0.5, 0.05);
  const SpectralField q = slow_random(g, sch.kappa, 8);
  const ForcingSet f = random_forcing(g, 12, sch.kappa);
  const auto ctx = make_balance_context(g, sch, f, sch.n_star + 1);
  const BalanceRun run = compute_levels(ctx, q, sch.n_star + 1);
  double worst = 0;
  for (int n = 0; n <= sch.n_star; ++n) worst = std::max(worst, dual_residual_check(run, n).max_rel);
  return finish("dual residual eps=" + fmt("%g", eps), worst, 1e-9,
                "n<=" + std::to_string(sch.n_star) + ", " + std::to_string(N) + "^3, random forced slow state, " +
                    (ctx->formal() ? "formal" : "numeric") + " levels",
                t0);
}

std::vector<OracleResult> oracle_invariants(int N) {
  std::vector<OracleResult> out;
  const Grid g = Grid::cube(N);
  const Schedule sch = make_schedule(0.05, 0.5, 0.05);

  {  // parity and zero mean over 100 forced steps
    const auto t0 = clock_type::now();
    StepperConfig cfg = StepperConfig::make_default(g, sch);
    cfg.t_end = 100 * cfg.dt;
    double parity = 0, mean = 0;
    int seen = 0;
    integrate(random_state(g, 21, 0.3), sch, cfg, random_forcing(g, 3), 1, [&](double, const PrimitiveState& W) {
      parity = std::max(parity, parity_error(W));
      for (const SpectralField* f : {&W.u, &W.v, &W.rho}) mean = std::max(mean, std::abs(f->coeffs()[0]));
      ++seen;
    });
    const std::string d = std::to_string(seen - 1) + " IF-RK4 steps, " + std::to_string(N) + "^3, forced";
    out.push_back(finish("parity preservation", parity, 1e-10, d, t0));
    out.push_back(finish("zero mean preservation", mean, 0.0, d + ", exact", t0));
  }
  {
    const auto t0 = clock_type::now();
    double worst = 0;
    for (std::uint64_t seed : {1, 2, 3})
      for (double kappa : {1.5, 2.5, 3.2, 4.7}) {
        const SpectralField f = random_field(g, seed, seed == 2 ? Parity::odd : Parity::even, 0.3);
        const ModeSplit m = mode_split(f, kappa);
        const double a = inner(f, f);
        worst = std::max(worst, std::abs(a - inner(m.low, m.low) - inner(m.high, m.high)) / a);
        worst = std::max(worst, std::abs(inner(m.low, m.high)) / a);
        worst = std::max(worst, l2_distance(m.low + m.high, f) / std::sqrt(a));
      }
    out.push_back(finish("mode_split orthogonality", worst, 1e-13, "Pythagoras, cross inner product, sum", t0));
  }
  {
    const auto t0 = clock_type::now();
    double worst = 0;
    int cases = 0;
    for (double a : {0.3, 0.8, 1.5})
      for (double sigma : {0.1, 0.5, 0.9 * a})
        for (double kappa : {1.0, 2.0, 3.5, 5.0}) {
          const ModeSplit m = mode_split(random_field(g, 12, Parity::even, a), kappa, sigma);
          if (!m.bound_ok) worst = std::max(worst, 2.0);
          if (m.tail_bound > 0) worst = std::max(worst, m.l2_high / m.tail_bound);
          ++cases;
        }
    out.push_back(finish("Gevrey tail bound", worst, 1.0,
                         "max |(1-P<)f|_0 / (e^{-sigma kappa} ||f||_sigma) over " + std::to_string(cases) +
                             " synthetic fields",
                         t0));
  }
  {
    const auto t0 = clock_type::now();
    StepperConfig cfg = StepperConfig::make_default(g, sch, 0.5);
    const Trajectory tr = integrate(random_state(g, 8, 0.3, 0.5), sch, cfg, zero_forcing(g));
    double rise = 0;
    for (std::size_t i = 1; i < tr.rows.size(); ++i)
      rise = std::max(rise, (tr.rows[i].energy - tr.rows[i - 1].energy) / tr.rows.front().energy);
    QgenConfig qc;
    qc.n = 0;
    qc.dt = 0.02;
    qc.t_end = 0.5;
    const QgenTrajectory qt = integrate_qgen(slow_random(g, sch.kappa, 9), sch, qc, zero_forcing(g));
    for (std::size_t i = 1; i < qt.rows.size(); ++i)
      rise = std::max(rise, (qt.rows[i].energy - qt.rows[i - 1].energy) / qt.rows.front().energy);
    out.push_back(finish("energy monotone, f=0", rise, 0.0,
                         "largest relative step-to-step energy increase, PE and QGE^0, " + std::to_string(N) + "^3",
                         t0));
  }
  return out;
}

std::vector<OracleResult> run_oracle_suite(const OracleSuiteOptions& opt) {
  const bool q = opt.quick;
  std::vector<OracleResult> out;
  out.push_back(oracle_round_trip(q ? 5 : 100, opt.N));
  out.push_back(oracle_equivalence(q ? 3 : 50, opt.N));
  out.push_back(oracle_skew_energy(q ? 3 : 50, opt.N));
  out.push_back(oracle_tangent(q ? 1 : 5, opt.N));
  out.push_back(oracle_dual(1e-2, opt.N));
  for (auto& r : oracle_invariants(12)) out.push_back(std::move(r));
  return out;
}

std::string format_result(const OracleResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s %s: %.3e %s %.1e (%s; %.1f s)", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.value,
                r.pass ? "<=" : ">", r.tol, r.detail.c_str(), r.seconds);
  return buf;
}

}  // namespace blab
