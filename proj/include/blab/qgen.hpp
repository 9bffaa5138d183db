#pragma once

#include <functional>
#include <string>
#include <vector>

#include "blab/balance.hpp"

namespace blab {

/// d q/dt = G^n(q): mu Delta3 q + f_q< - P<[curl(u^n.grad v^n) - d_z(u^n.grad rho^n)].
/// n < 0 selects n_star.
SpectralField qgen_rhs(const SpectralField& qtilde, const Schedule& sch, const ForcingSet& f, int n = -1);

struct QgenConfig {
  double dt = 0.01;
  double t_end = 1.0;
  /// slaving level; < 0 means n_star
  int n = -1;
  int output_every = 1;
  BalanceOptions balance{BalanceOptions::Mode::numeric, 1};
};

struct QgenRow {
  double t, q_l2, q_s, energy;
};

/// ||f|| = |(f_v<, f_rho<)|_{s+3}
double forcing_norm(const ForcingSet& f, const Schedule& sch);

struct QgenTrajectory {
  std::vector<QgenRow> rows;
  SpectralField final_q;
  /// 2 |q(0)|_s + ||f||, and whether every output stayed below it
  double bound = 0;
  bool bound_ok = true;
};

class QgenBlowUp : public Error {
 public:
  QgenBlowUp(const std::string& msg, SpectralField q, double t)
      : Error(msg), last_good(std::move(q)), time(t) {}
  SpectralField last_good;
  double time;
};

using SlowObserver = std::function<void(double t, const SpectralField& q)>;

/// Diffusion exactly per mode, the rest by Lawson RK4 with a uniform step
/// t_end / ceil(t_end / dt). Observes t = 0, every output_every steps and
/// the final time.
QgenTrajectory integrate_qgen(const SpectralField& q0, const Schedule& sch, const QgenConfig& cfg,
                              const ForcingSet& f, const SlowObserver& observe = {});

/// Energy of the geostrophic state of q: -1/2 <psi, q>.
double slow_energy(const SpectralField& q);

/// t,q_l2,q_s,energy
void write_qgen_csv(const std::string& path, const std::vector<QgenRow>& rows);

}  // namespace blab
