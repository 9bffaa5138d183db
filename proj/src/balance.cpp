#include "blab/balance.hpp"

#include <cmath>

#include "blab/checkpoint.hpp"
#include "blab/norms.hpp"

namespace blab {
namespace {

const cplx I(0, 1);

bool zero2(double a, double b) { return a == 0 && b == 0; }

}  // namespace

BalanceContext::BalanceContext(const Grid& g, const Schedule& sch, const ForcingSet& f,
                               bool formal, int P)
    : sch_(sch), space_(g, sch.kappa), formal_(formal), P_(formal ? P : 0) {
  const BandSpace& s = space_;
  dx = s.multiplier([](double a, double, double) { return I * a; });
  dy = s.multiplier([](double, double b, double) { return I * b; });
  dz = s.multiplier([](double, double, double c) { return I * c; });
  dzz = s.multiplier([](double, double, double c) { return cplx(-c * c); });
  lap3 = s.multiplier([](double a, double b, double c) { return cplx(-(a * a + b * b + c * c)); });
  inv_lap3 = s.multiplier([](double a, double b, double c) {
    const double k2 = a * a + b * b + c * c;
    return k2 == 0 ? cplx(0.0) : cplx(-1.0 / k2);
  });
  inv_lap2 = s.multiplier([](double a, double b, double) {
    return zero2(a, b) ? cplx(0.0) : cplx(-1.0 / (a * a + b * b));
  });
  // w = -int Delta2 chi dz; the z-constant vanishes for even chi
  w_of_chi = s.multiplier([](double a, double b, double c) {
    return c == 0 ? cplx(0.0) : (a * a + b * b) / (I * c);
  });
  xy_mean = s.multiplier([](double a, double b, double c) {
    return cplx(zero2(a, b) && c != 0 ? 1.0 : 0.0);
  });
  pz = s.multiplier([](double a, double b, double) { return cplx(zero2(a, b) ? 0.0 : 1.0); });
  interior = s.multiplier([](double a, double b, double c) {
    return cplx(!zero2(a, b) && c != 0 ? 1.0 : 0.0);
  });
  f_q = s.restrict(f.f_q);
  f_chi = s.restrict(f.f_chi);
  fbar_u = s.restrict(f.fbar_u);
  fbar_v = s.restrict(f.fbar_v);
  f_phi_zz = s.restrict(f.f_phi_zz);
}

LayoutPtr BalanceContext::base_layout() const { return jet_layout(0, 0, P_, formal_); }

JetFields JetFields::zero(const BalanceContext& c, LayoutPtr l) {
  const BandSpace& s = c.space();
  return {BandPoly(s, l), BandPoly(s, l), BandPoly(s, l), BandPoly(s, l)};
}

JetAdvection jet_advection(const BalanceContext& c, const BandPoly& q, const JetFields& U) {
  const BandSpace& s = c.space();
  const BandPoly psi = apply_modes(q + apply_modes(U.phi, c.dzz), c.inv_lap3);
  const BandPoly u = U.vu - apply_modes(psi, c.dy) + apply_modes(U.chi, c.dx);
  const BandPoly v = U.vv + apply_modes(psi, c.dx) + apply_modes(U.chi, c.dy);
  const BandPoly rho = apply_modes(U.phi, c.dz) - apply_modes(psi, c.dz);
  const PhysPoly pu = to_phys(u), pv = to_phys(v), pw = to_phys(apply_modes(U.chi, c.w_of_chi));
  auto transport = [&](const BandPoly& f) {
    PhysPoly acc(q.layout, s.phys_size());
    jet_mul_acc(acc, pu, to_phys(apply_modes(f, c.dx)));
    jet_mul_acc(acc, pv, to_phys(apply_modes(f, c.dy)));
    jet_mul_acc(acc, pw, to_phys(apply_modes(f, c.dz)));
    return from_phys(acc, s);
  };
  return {transport(u), transport(v), transport(rho)};
}

BandPoly jet_g(const BalanceContext& c, const BandPoly& q, const JetAdvection& a) {
  BandPoly g = c.mu() * apply_modes(q, c.lap3);
  g.add_constant(c.f_q);
  g -= apply_modes(a.nv, c.dx) - apply_modes(a.nu, c.dy);
  g += apply_modes(a.nrho, c.dz);
  return g;
}

JetFields jet_update(const BalanceContext& c, const JetFields& U, const JetAdvection& a,
                     const JetFields& D) {
  const double eps = c.eps(), mu = c.mu();
  const BandPoly curl = apply_modes(a.nv, c.dx) - apply_modes(a.nu, c.dy);
  const BandPoly div = apply_modes(a.nu, c.dx) + apply_modes(a.nv, c.dy);

  // vbar_z^{n+1} = eps A_perp with A = D vbar_z G + d_z mean(N) - mu d_zz vbar_z - d_z fbar,
  // integrated once in z
  BandPoly au = D.vu + apply_modes(a.nu, c.xy_mean) - mu * apply_modes(U.vu, c.dzz);
  au.add_constant(c.fbar_u, -1.0);
  BandPoly av = D.vv + apply_modes(a.nv, c.xy_mean) - mu * apply_modes(U.vv, c.dzz);
  av.add_constant(c.fbar_v, -1.0);

  // Delta3 Phi^{n+1} = eps [Delta3 D X G + Delta3 Delta2^{-1} div N - mu Delta3^2 X - Delta3 f_chi]
  BandPoly phi = D.chi + apply_modes(div, c.inv_lap2) - mu * apply_modes(U.chi, c.lap3);
  phi.add_constant(c.f_chi, -1.0);

  // Delta3 X^{n+1} = -eps [D Phi_zz G + d_zz Delta2^{-1} curl N + P_z d_z N_rho
  //                        - mu Delta3 Phi_zz - d_zz f_phi]
  BandPoly xl = apply_modes(D.phi, c.dzz) + apply_modes(apply_modes(curl, c.inv_lap2), c.dzz) +
                apply_modes(apply_modes(a.nrho, c.dz), c.pz) - mu * apply_modes(apply_modes(U.phi, c.dzz), c.lap3);
  xl.add_constant(c.f_phi_zz, -1.0);

  JetFields n;
  n.vu = eps_mul(-1.0 * av, eps);
  n.vv = eps_mul(au, eps);
  n.phi = eps_mul(apply_modes(phi, c.interior), eps);
  n.chi = eps_mul(-1.0 * apply_modes(apply_modes(xl, c.inv_lap3), c.interior), eps);
  return n;
}

JetFields jet_derivative(const BalanceContext& c, int n, const BandPoly& q, const BandPoly& G) {
  if (n == 0) return JetFields::zero(c, q.layout);
  const BandPoly qe = with_last_direction(extend(q, extended_layout(*q.layout, true)), G);
  const std::vector<JetFields> sub = jet_chain(c, n, qe);
  const JetFields& top = sub[n];
  return {last_direction(top.vu), last_direction(top.vv), last_direction(top.chi),
          last_direction(top.phi)};
}

std::vector<JetFields> jet_chain(const BalanceContext& c, int L, const BandPoly& q) {
  std::vector<JetFields> levels{JetFields::zero(c, q.layout)};
  for (int l = 1; l <= L; ++l) {
    const JetFields& U = levels.back();
    const JetAdvection a = jet_advection(c, q, U);
    const JetFields D = l == 1 ? JetFields::zero(c, q.layout) : jet_derivative(c, l - 1, q, jet_g(c, q, a));
    JetFields next = jet_update(c, U, a, D);
    levels.push_back(std::move(next));
  }
  return levels;
}

// ---------------------------------------------------------------------------

bool use_formal(const Schedule& sch, int L, const BalanceOptions& opt) {
  switch (opt.mode) {
    case BalanceOptions::Mode::numeric:
      return false;
    case BalanceOptions::Mode::formal:
      return true;
    default:
      return L >= 2 && std::pow(sch.eps, L - 1) < 1e-10;
  }
}

std::shared_ptr<const BalanceContext> make_balance_context(const Grid& g, const Schedule& sch,
                                                           const ForcingSet& f, int L,
                                                           const BalanceOptions& opt) {
  if (opt.extra_orders < 0) throw Error("balance: extra_orders must be >= 0");
  const bool formal = use_formal(sch, L, opt);
  return std::make_shared<const BalanceContext>(g, sch, f, formal, L + opt.extra_orders);
}

void check_slow_state(const SpectralField& qtilde, const Schedule& sch) {
  const double scale = std::max(1.0, qtilde.max_abs());
  if (high_pass(qtilde, sch.kappa).max_abs() > 1e-14 * scale)
    throw Error("balance: slow state has modes with |k| >= kappa=" + std::to_string(sch.kappa));
  SpectralField t = qtilde;
  t.set_parity(Parity::even);
  if (parity_error(t) > 1e-12 * scale) throw Error("balance: slow state is not even in z");
  if (std::abs(qtilde.coeffs()[0]) > 1e-14 * scale) throw Error("balance: slow state has a mean");
}

namespace {

BalanceSet evaluate_level(const BalanceContext& c, const JetFields& U, int n, unsigned S = 0) {
  const BandSpace& s = c.space();
  const double eps = c.eps();
  return {n, s.expand(evaluate(U.vu, eps, S), Parity::even), s.expand(evaluate(U.vv, eps, S), Parity::even),
          s.expand(evaluate(U.chi, eps, S), Parity::even), s.expand(evaluate(U.phi, eps, S), Parity::even)};
}

void check_level(const Schedule& sch, int n) {
  if (n < 0) throw Error("balance: negative level");
  if (n > sch.n_star)
    throw Error("balance: level n=" + std::to_string(n) + " exceeds the optimal truncation n*=" +
                std::to_string(sch.n_star) + " (the iteration is meaningful for n <= n* only)");
}

}  // namespace

BalanceRun compute_levels(std::shared_ptr<const BalanceContext> ctx, const SpectralField& qtilde,
                          int L) {
  check_slow_state(qtilde, ctx->schedule());
  BalanceRun run;
  run.context = ctx;
  run.q = BandPoly::constant(ctx->space(), ctx->base_layout(), ctx->restrict(qtilde));
  run.jets = jet_chain(*ctx, L, run.q);
  for (int n = 0; n <= L; ++n) run.levels.push_back(evaluate_level(*ctx, run.jets[n], n));
  return run;
}

BalanceRun iterate_balance(const SpectralField& qtilde, const Schedule& sch, const ForcingSet& f,
                           int n_target, const BalanceOptions& opt) {
  check_level(sch, n_target);
  return compute_levels(make_balance_context(qtilde.grid(), sch, f, n_target, opt), qtilde, n_target);
}

std::vector<BalanceTangent> tangent_balance(const SpectralField& qtilde,
                                            const SpectralField& direction, const Schedule& sch,
                                            const ForcingSet& f, int n_target,
                                            const BalanceOptions& opt) {
  check_level(sch, n_target);
  check_slow_state(qtilde, sch);
  check_slow_state(direction, sch);
  const auto ctx = make_balance_context(qtilde.grid(), sch, f, n_target, opt);
  const BandSpace& s = ctx->space();
  const BandPoly q0 = BandPoly::constant(s, ctx->base_layout(), ctx->restrict(direction));
  const BandPoly q = with_last_direction(
      extend(BandPoly::constant(s, ctx->base_layout(), ctx->restrict(qtilde)),
             extended_layout(*ctx->base_layout(), false)),
      q0);
  const std::vector<JetFields> jets = jet_chain(*ctx, n_target, q);
  std::vector<BalanceTangent> out;
  for (int n = 0; n <= n_target; ++n) {
    const BalanceSet b = evaluate_level(*ctx, jets[n], n, 1u);
    out.push_back({n, b.vbar_u, b.vbar_v, b.X, b.Phi});
  }
  return out;
}

SpectralField g_slow(const BalanceRun& run, int n) {
  const BalanceContext& c = *run.context;
  if (n < 0 || n >= static_cast<int>(run.jets.size())) throw Error("g_slow: level not computed");
  const BandPoly G = jet_g(c, run.q, jet_advection(c, run.q, run.jets[n]));
  return c.space().expand(evaluate(G, c.eps()), Parity::even);
}

SpectralField g_slow(const SpectralField& qtilde, const Schedule& sch, const ForcingSet& f, int n) {
  BalanceOptions opt;
  opt.mode = BalanceOptions::Mode::numeric;
  return g_slow(iterate_balance(qtilde, sch, f, n, opt), n);
}

PrimitiveState slaved_state(const SpectralField& qtilde, const BalanceSet& B) {
  QGDecomposition d{qtilde, B.vbar_u, B.vbar_v, B.X, B.Phi};
  return reconstruct(d).W;
}

PrimitiveState well_prepared_init(const SpectralField& qtilde, const Schedule& sch,
                                  const ForcingSet& f, int n, const BalanceOptions& opt) {
  BalanceOptions o = opt;
  if (o.mode == BalanceOptions::Mode::automatic) o.mode = BalanceOptions::Mode::numeric;
  const BalanceRun run = iterate_balance(qtilde, sch, f, n, o);
  return slaved_state(qtilde, run.levels[n]);
}

void write_balance_checkpoint(const std::string& path, const BalanceRun& run) {
  std::vector<NamedField> arrays;
  for (const BalanceSet& b : run.levels) {
    const std::string n = std::to_string(b.n);
    arrays.emplace_back("Vbar_u_" + n, b.vbar_u);
    arrays.emplace_back("Vbar_v_" + n, b.vbar_v);
    arrays.emplace_back("X_" + n, b.X);
    arrays.emplace_back("Phi_" + n, b.Phi);
  }
  write_checkpoint(path, run.context->space().grid(), arrays);
}

}  // namespace blab
