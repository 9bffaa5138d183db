#pragma once

// The two measurement drivers behind the harness: residuals against n for
// one slow state, and PE versus the slow equation over time.

#include <functional>
#include <string>
#include <vector>

#include "blab/diagnostics.hpp"
#include "blab/pe_solver.hpp"
#include "blab/qgen.hpp"

namespace blab {

struct ResidualDecayRow {
  int n = 0;
  double res_vbar = 0, res_chi = 0, res_phi = 0, res_aggregate_s = 0, res_aggregate_0 = 0;
  /// |R^{n+1}|_s / |R^n|_s, nan for the last row
  double ratio = 0;
  /// direct vs difference, relative to the term scale
  double dual_rel = 0;
};

struct ResidualDecayResult {
  double eps = 0;
  bool formal = false;
  std::vector<ResidualDecayRow> rows;
  /// geometric mean of the ratios over n < n_max
  double geo_mean_ratio = 0;
  double seconds = 0;
  /// levels 0 .. n_max + 1
  BalanceRun run;
};

/// Residuals for n = 0 .. n_max (n_max < 0: n_star) of qtilde (band limited).
ResidualDecayResult run_residual_decay(const SpectralField& qtilde, const Schedule& sch, const ForcingSet& f,
                                       int n_max = -1, bool dual = true, const BalanceOptions& opt = {});

struct BalanceErrorSetup {
  /// full initial slow field; its part above kappa enters as a geostrophic tail
  SpectralField q0;
  Schedule schedule;
  ForcingSet forcing;
  /// PE initialization level
  int n_init = 0;
  /// level of the slow equation and of the reference slaved state; < 0: n_star
  int n_ref = -1;
  double t_end = 1.0;
  int samples = 10;
  /// 0 selects StepperConfig::make_default
  double dt_pe = 0;
  double dt_qg = 0.01;
};

struct BalanceErrorResult {
  std::vector<ErrorReport> series;
  /// combined error at t = 0
  double initial = 0;
  double seconds = 0;
  int n_ref = 0;
};

using ErrorObserver = std::function<void(const ErrorReport&, const PrimitiveState& W)>;

/// PE from the n_init initialization against the level-n_ref slaved state of
/// the slow solution started at P< q0.
BalanceErrorResult run_balance_error(const BalanceErrorSetup& setup, const ErrorObserver& observe = {});

/// PE initial state: slaved level n of P< q0 plus the geostrophic state of
/// (1 - P<) q0.
PrimitiveState initial_pe_state(const SpectralField& q0, const Schedule& sch, const ForcingSet& f, int n);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace blab
