#pragma once

#include <string>
#include <vector>

namespace blab {

enum class CheckStatus { pass, fail, unknown };

struct AdmissibilityCheck {
  std::string name;
  CheckStatus status;
  std::string detail;
};

/// Parameters derived from eps and sigma: kappa = eps^{-1/4},
/// delta = eps^{1/4}, eta = sigma / ln 2, n_star = floor(eta / delta), K = 1/2.
struct Schedule {
  double eps = 1;
  double mu = 0.05;
  double sigma = 0.5;
  double s = 2;
  double kappa = 1;
  double delta = 1;
  double eta = 0;
  int n_star = 0;
  double K = 0.5;
  /// True when kappa was set explicitly instead of derived from eps.
  bool kappa_override = false;
  std::vector<AdmissibilityCheck> checks;
};

/// Throws Error for eps outside (0,1], sigma outside (0,1), mu <= 0 or
/// s < 0.
Schedule make_schedule(double eps, double sigma, double mu, double s = 2);
/// Same schedule with kappa replaced (recorded as an override).
Schedule with_kappa(Schedule sch, double kappa);
/// floor(eta / delta) with a guard against rounding just below an integer.
int optimal_truncation(double eta, double delta);

const char* status_name(CheckStatus s);

}  // namespace blab
