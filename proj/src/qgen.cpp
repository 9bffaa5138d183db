#include "blab/qgen.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "blab/norms.hpp"
#include "blab/operators.hpp"

namespace blab {

namespace {

int resolve_level(const Schedule& sch, int n) {
  const int level = n < 0 ? sch.n_star : n;
  if (level > sch.n_star)
    throw Error("qgen: level n=" + std::to_string(level) + " exceeds n*=" + std::to_string(sch.n_star));
  return level;
}

/// Non-diffusive part of G^n with a fixed context.
struct SlowRhs {
  std::shared_ptr<const BalanceContext> ctx;
  int n;
  SpectralField operator()(const SpectralField& q) const {
    const BalanceRun run = compute_levels(ctx, q, n);
    return g_slow(run, n) - laplacian3(q) * ctx->mu();
  }
};

void diffuse(SpectralField& q, double mu, double h) {
  const Grid& g = q.grid();
  for (std::size_t i = 0; i < q.size(); ++i) {
    const IVec3 k = g.k_of(i);
    const double a = g.kprime(0, k[0]), b = g.kprime(1, k[1]), c = g.kprime(2, k[2]);
    q.coeffs()[i] *= std::exp(-mu * (a * a + b * b + c * c) * h);
  }
}

SpectralField diffused(SpectralField q, double mu, double h) {
  diffuse(q, mu, h);
  return q;
}

}  // namespace

SpectralField qgen_rhs(const SpectralField& qtilde, const Schedule& sch, const ForcingSet& f, int n) {
  return g_slow(qtilde, sch, f, resolve_level(sch, n));
}

double forcing_norm(const ForcingSet& f, const Schedule& sch) {
  const double s = sch.s + 3;
  return sobolev_norm(low_pass(f.fu, sch.kappa), s) + sobolev_norm(low_pass(f.fv, sch.kappa), s) +
         sobolev_norm(low_pass(f.frho, sch.kappa), s);
}

double slow_energy(const SpectralField& q) { return -0.5 * inner(inv_laplacian3(q), q); }

QgenTrajectory integrate_qgen(const SpectralField& q0, const Schedule& sch, const QgenConfig& cfg,
                              const ForcingSet& f, const SlowObserver& observe) {
  if (!(cfg.dt > 0)) throw Error("integrate_qgen: dt must be > 0");
  if (cfg.t_end < 0) throw Error("integrate_qgen: t_end must be >= 0");
  if (cfg.output_every < 1) throw Error("integrate_qgen: output_every must be >= 1");
  const int n = resolve_level(sch, cfg.n);
  check_slow_state(q0, sch);
  const SlowRhs N{make_balance_context(q0.grid(), sch, f, n, cfg.balance), n};
  const double mu = sch.mu;

  const long nsteps = cfg.t_end == 0 ? 0 : static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  const double h = nsteps > 0 ? cfg.t_end / static_cast<double>(nsteps) : 0;

  QgenTrajectory tr;
  tr.bound = 2 * sobolev_norm(q0, sch.s) + forcing_norm(f, sch);
  SpectralField q = q0;
  auto emit = [&](double t) {
    const QgenRow r{t, l2_norm(q), sobolev_norm(q, sch.s), slow_energy(q)};
    if (r.q_s > tr.bound) tr.bound_ok = false;
    tr.rows.push_back(r);
    if (observe) observe(t, q);
  };
  emit(0.0);
  for (long i = 1; i <= nsteps; ++i) {
    const SpectralField k1 = N(q);
    const SpectralField k2 = N(diffused(q + k1 * (0.5 * h), mu, 0.5 * h));
    const SpectralField qh = diffused(q, mu, 0.5 * h);
    const SpectralField k3 = N(qh + k2 * (0.5 * h));
    const SpectralField k4 = N(diffused(q, mu, h) + diffused(k3, mu, 0.5 * h) * h);
    SpectralField next = diffused(q + k1 * (h / 6), mu, h) + diffused(k2 + k3, mu, 0.5 * h) * (h / 3) +
                         k4 * (h / 6);
    const double t = i * h;
    if (!std::isfinite(l2_norm(next)))
      throw QgenBlowUp("integrate_qgen: non-finite state at t=" + std::to_string(t), q, t - h);
    q = std::move(next);
    if (i % cfg.output_every == 0 || i == nsteps) emit(t);
  }
  tr.final_q = q;
  return tr;
}

void write_qgen_csv(const std::string& path, const std::vector<QgenRow>& rows) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << "t,q_l2,q_s,energy\n" << std::setprecision(17);
  for (const auto& r : rows) os << r.t << ',' << r.q_l2 << ',' << r.q_s << ',' << r.energy << '\n';
}

}  // namespace blab
