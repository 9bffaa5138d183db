#include "blab/schedule.hpp"

#include <cmath>
#include <numbers>

#include "blab/grid.hpp"

namespace blab {

int optimal_truncation(double eta, double delta) {
  const double r = eta / delta;
  const double n = std::floor(r + 1e-12 * std::max(1.0, r));
  return static_cast<int>(n);
}

Schedule make_schedule(double eps, double sigma, double mu, double s) {
  if (!(eps > 0 && eps <= 1)) throw Error("schedule: eps must lie in (0,1]");
  if (!(sigma > 0 && sigma < 1)) throw Error("schedule: sigma must lie in (0,1)");
  if (!(mu > 0)) throw Error("schedule: mu must be positive");
  if (!(s >= 0)) throw Error("schedule: s must be nonnegative");
  Schedule sch;
  sch.eps = eps;
  sch.sigma = sigma;
  sch.mu = mu;
  sch.s = s;
  sch.delta = std::pow(eps, 0.25);
  sch.kappa = 1.0 / sch.delta;
  sch.eta = sigma / std::numbers::ln2;
  sch.n_star = optimal_truncation(sch.eta, sch.delta);
  sch.K = 0.5;

  // Only the sigma/10 and 1/(16 mu^2) bounds on eps are explicit numbers;
  // the remaining thresholds involve constants that are never given values.
  sch.checks.push_back({"eps <= sigma/10", eps <= sigma / 10 ? CheckStatus::pass : CheckStatus::fail,
                        std::to_string(eps) + " vs " + std::to_string(sigma / 10)});
  const double bound = 1.0 / (16 * mu * mu);
  sch.checks.push_back({"eps <= 1/(16 mu^2)", eps <= bound ? CheckStatus::pass : CheckStatus::fail,
                        std::to_string(eps) + " vs " + std::to_string(bound)});
  sch.checks.push_back({"eps <= thresholds with c1..c9", CheckStatus::unknown,
                        "numbered constants are not specified"});
  return sch;
}

Schedule with_kappa(Schedule sch, double kappa) {
  if (!(kappa > 0)) throw Error("schedule: kappa override must be positive");
  sch.kappa = kappa;
  sch.kappa_override = true;
  return sch;
}

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    default: return "unknown";
  }
}

}  // namespace blab
