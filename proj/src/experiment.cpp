#include "blab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "blab/initial_data.hpp"
#include "blab/norms.hpp"
#include "blab/operators.hpp"

namespace blab {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ResidualDecayResult run_residual_decay(const SpectralField& qtilde, const Schedule& sch, const ForcingSet& f,
                                       int n_max, bool dual, const BalanceOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const int N = n_max < 0 ? sch.n_star : n_max;
  if (N > sch.n_star)
    throw Error("residual-decay: n_max=" + std::to_string(N) + " exceeds n*=" + std::to_string(sch.n_star));
  // R^n needs level n+1
  const auto ctx = make_balance_context(qtilde.grid(), sch, f, N + 1, opt);
  BalanceRun run = compute_levels(ctx, qtilde, N + 1);
  const std::vector<ResidualTriple> rs = residuals(run);

  ResidualDecayResult out;
  out.eps = sch.eps;
  out.formal = ctx->formal();
  double logsum = 0;
  for (int n = 0; n <= N; ++n) {
    ResidualDecayRow r;
    r.n = n;
    r.res_vbar = rs[n].vbar_s;
    r.res_chi = rs[n].chi_s;
    r.res_phi = rs[n].phi_s;
    r.res_aggregate_s = rs[n].aggregate_s();
    r.res_aggregate_0 = rs[n].aggregate_0();
    r.ratio = n < N ? rs[n + 1].aggregate_s() / rs[n].aggregate_s() : std::numeric_limits<double>::quiet_NaN();
    r.dual_rel = dual ? dual_residual_check(run, n).max_rel : std::numeric_limits<double>::quiet_NaN();
    if (n < N) logsum += std::log(r.ratio);
    out.rows.push_back(r);
  }
  out.geo_mean_ratio = N > 0 ? std::exp(logsum / N) : std::numeric_limits<double>::quiet_NaN();
  out.run = std::move(run);
  out.seconds = seconds_since(t0);
  return out;
}

PrimitiveState initial_pe_state(const SpectralField& q0, const Schedule& sch, const ForcingSet& f, int n) {
  const SpectralField low = low_pass(q0, sch.kappa);
  PrimitiveState W = well_prepared_init(low, sch, f, n);
  const SpectralField tail = q0 - low;
  if (tail.max_abs() > 0) W += geostrophic_state(dealias(tail));
  return W;
}

BalanceErrorResult run_balance_error(const BalanceErrorSetup& s, const ErrorObserver& observe) {
  const auto t0 = std::chrono::steady_clock::now();
  const Schedule& sch = s.schedule;
  const Grid& g = s.q0.grid();
  if (s.samples < 1) throw Error("balance-error: samples must be >= 1");
  if (!(s.t_end > 0)) throw Error("balance-error: t_end must be > 0");
  const int n_ref = s.n_ref < 0 ? sch.n_star : s.n_ref;
  if (s.n_init > sch.n_star || n_ref > sch.n_star)
    throw Error("balance-error: levels must not exceed n*=" + std::to_string(sch.n_star));

  const double dt_sample = s.t_end / s.samples;
  // PE: a whole number of steps per sample
  StepperConfig pe = StepperConfig::make_default(g, sch, s.t_end);
  if (s.dt_pe > 0) pe.dt = s.dt_pe;
  const long pe_per = static_cast<long>(std::ceil(dt_sample / pe.dt - 1e-9));
  pe.dt = dt_sample / static_cast<double>(pe_per);

  QgenConfig qc;
  qc.n = n_ref;
  qc.t_end = s.t_end;
  const long qg_per = static_cast<long>(std::ceil(dt_sample / s.dt_qg - 1e-9));
  qc.dt = dt_sample / static_cast<double>(qg_per);
  qc.output_every = static_cast<int>(qg_per);

  const SpectralField q_low = low_pass(s.q0, sch.kappa);
  std::vector<PrimitiveState> ref;
  integrate_qgen(q_low, sch, qc, s.forcing, [&](double, const SpectralField& q) {
    BalanceOptions o;
    o.mode = BalanceOptions::Mode::numeric;
    ref.push_back(slaved_state(q, iterate_balance(q, sch, s.forcing, n_ref, o).levels[n_ref]));
  });

  BalanceErrorResult out;
  out.n_ref = n_ref;
  std::size_t i = 0;
  integrate(initial_pe_state(s.q0, sch, s.forcing, s.n_init), sch, pe, s.forcing, static_cast<int>(pe_per),
            [&](double t, const PrimitiveState& W) {
              if (i >= ref.size()) throw Error("balance-error: sample count mismatch");
              const ErrorReport e = balance_error(W, ref[i++], t);
              out.series.push_back(e);
              if (observe) observe(e, W);
            });
  out.initial = out.series.front().combined;
  out.seconds = seconds_since(t0);
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("loglog_slope: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace blab
