#pragma once

#include <string>
#include <vector>

#include "blab/balance.hpp"
#include "blab/decomposition.hpp"
#include "blab/schedule.hpp"

namespace blab {

/// Residuals of one level. The mean-shear part is a pair of profiles.
struct ResidualTriple {
  int n = 0;
  SpectralField r_vbar_u, r_vbar_v, r_chi, r_phi;
  double vbar_0 = 0, chi_0 = 0, phi_0 = 0;
  double vbar_s = 0, chi_s = 0, phi_s = 0;
  double aggregate_s() const { return vbar_s + chi_s + phi_s; }
  double aggregate_0() const { return vbar_0 + chi_0 + phi_0; }
};

/// Fills the norms from the fields (Sobolev index s).
void finish_residual(ResidualTriple& r, double s);

/// (1/eps) differences of consecutive levels:
///   R_vbar = ((1/eps)[d_z Vbar^n - d_z Vbar^{n+1}])^perp, perp(a, b) = (-b, a)
///   R_chi  = (1/eps) Delta3 [Phi^{n+1} - Phi^n]
///   R_phi  = (1/eps) Delta3 [X^n - X^{n+1}]
ResidualTriple residual_from_levels(const BalanceSet& Bn, const BalanceSet& Bn1, const Schedule& sch);

/// Same differences taken on the series of a run before evaluation, so that
/// the cancelling low orders never meet roundoff. n = 0 .. levels-2.
std::vector<ResidualTriple> residuals(const BalanceRun& run);

/// Residual of level n assembled term by term from its defining equations:
/// slaved advection, the tangent of level n along G^n and the linear terms.
/// In a formal run the top order is dropped, as in the differences.
ResidualTriple residual_direct(const BalanceRun& run, int n);

struct DualReport {
  int n = 0;
  /// max over fields and orders of |direct - difference| / term scale
  double max_rel = 0;
  /// orders compared (1 in numeric mode)
  int orders = 0;
};
/// Compares the two residual forms order by order (needs level n+1 in run).
DualReport dual_residual_check(const BalanceRun& run, int n);

struct ErrorReport {
  double t = 0;
  double err_v = 0, err_rho = 0, combined = 0;
};
/// L2 distances of (u, v) and rho; combined^2 = err_v^2 + err_rho^2.
ErrorReport balance_error(const PrimitiveState& W, const PrimitiveState& Wstar, double t = 0);

struct GevreyFit {
  double sigma = 0;
  double amplitude = 0;
  /// rms of the log residuals
  double residual = 0;
  int shells = 0;
  bool reliable = false;
};
/// Least squares of log(shell max |W_k|) against |k| over the shells above
/// floor; shells are integer parts of |k|, the k = 0 shell is skipped.
GevreyFit gevrey_fit(const SpectralField& f, double floor = 1e-14);

struct ModeSplit {
  SpectralField low, high;
  double l2_high = 0;
  /// e^{-sigma kappa} ||f||_sigma, or +inf when not checked or not finite
  double tail_bound = 0;
  bool bound_ok = true;
};
/// P< f and (1 - P<) f; with sigma > 0 also checks |high|_0 <= e^{-sigma kappa} ||f||_sigma.
ModeSplit mode_split(const SpectralField& f, double kappa, double sigma = 0);

/// One row of the diagnostics table; unused entries are written as nan.
struct DiagnosticsRow {
  std::string run_id;
  double eps = 0;
  int n = 0;
  double t = 0;
  double err_v, err_rho, combined;
  double res_vbar, res_chi, res_phi, res_aggregate_s;
  double sigma_fit, energy, parity_error;
  DiagnosticsRow();
};
/// run_id,eps,n,t,err_v,err_rho,combined,res_vbar,res_chi,res_phi,res_aggregate_s,sigma_fit,energy,parity_error
const char* diagnostics_csv_header();
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRow>& rows);
void append_diagnostics_row(std::ostream& out, const DiagnosticsRow& row);

}  // namespace blab
