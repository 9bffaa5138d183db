#include "blab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "blab/fft.hpp"
#include "blab/norms.hpp"
#include "blab/operators.hpp"

namespace blab {

namespace {

double pair_norm(const SpectralField& a, const SpectralField& b, double s) {
  const double x = sobolev_norm(a, s), y = sobolev_norm(b, s);
  return std::sqrt(x * x + y * y);
}

double pair_l2(const SpectralField& a, const SpectralField& b) {
  return std::hypot(l2_norm(a), l2_norm(b));
}

/// per-order max |coefficient| of the empty-subset series
std::vector<double> order_max(const BandPoly& a) {
  const JetLayout& l = *a.layout;
  std::vector<double> m(l.count[0], 0.0);
  for (int j = 0; j < l.count[0]; ++j) {
    const cplx* c = a.comp(l.comp(0, j));
    for (std::size_t i = 0; i < a.nb(); ++i) m[j] = std::max(m[j], std::abs(c[i]));
  }
  return m;
}

struct Series {
  BandPoly vu, vv, chi, phi;
};

Series level_difference(const BalanceRun& run, int n) {
  const BalanceContext& c = *run.context;
  const double eps = c.eps();
  const JetFields& a = run.jets[n];
  const JetFields& b = run.jets[n + 1];
  Series s;
  // ((1/eps) d_z [V^n - V^{n+1}])^perp
  const BandPoly du = eps_div(apply_modes(a.vu - b.vu, c.dz), eps);
  const BandPoly dv = eps_div(apply_modes(a.vv - b.vv, c.dz), eps);
  s.vu = -1.0 * dv;
  s.vv = du;
  s.chi = eps_div(apply_modes(b.phi - a.phi, c.lap3), eps);
  s.phi = eps_div(apply_modes(a.chi - b.chi, c.lap3), eps);
  return s;
}

/// Terms of each residual in its defining form, kept apart for the scale.
struct DirectTerms {
  std::vector<BandPoly> vu, vv, chi, phi;
};

DirectTerms direct_terms(const BalanceRun& run, int n) {
  const BalanceContext& c = *run.context;
  const double eps = c.eps(), mu = c.mu();
  const BandPoly& q = run.q;
  const JetFields& U = run.jets[n];
  const JetAdvection a = jet_advection(c, q, U);
  const BandPoly G = jet_g(c, q, a);

  // tangent of level n along G: an unweighted direction, then its coefficient
  const BandPoly qe = with_last_direction(extend(q, extended_layout(*q.layout, false)), G);
  JetFields T = JetFields::zero(c, q.layout);
  if (n > 0) {
    const std::vector<JetFields> chain = jet_chain(c, n, qe);
    const JetFields& top = chain[n];
    T = {last_direction(top.vu), last_direction(top.vv), last_direction(top.chi),
         last_direction(top.phi)};
  }

  const BandSpace& s = c.space();
  const LayoutPtr l = q.layout;
  auto konst = [&](const std::vector<cplx>& f, const std::vector<cplx>& m) {
    BandPoly p(s, l);
    p.add_constant(f);
    return apply_modes(p, m);
  };
  auto dz = [&](const BandPoly& x) { return apply_modes(x, c.dz); };
  auto m = [&](const BandPoly& x, const std::vector<cplx>& k) { return apply_modes(x, k); };

  DirectTerms d;
  // D Vbar_z G + (1/eps) Vbar_z^perp + d_z mean(u.grad v) - mu d_zz Vbar_z - d_z fbar
  d.vu = {dz(T.vu), -1.0 * eps_div(dz(U.vv), eps), dz(m(a.nu, c.xy_mean)),
          -mu * dz(m(U.vu, c.dzz)), -1.0 * dz(konst(c.fbar_u, c.xy_mean))};
  d.vv = {dz(T.vv), eps_div(dz(U.vu), eps), dz(m(a.nv, c.xy_mean)), -mu * dz(m(U.vv, c.dzz)),
          -1.0 * dz(konst(c.fbar_v, c.xy_mean))};

  const BandPoly div = m(a.nu, c.dx) + m(a.nv, c.dy);
  const BandPoly curl = m(a.nv, c.dx) - m(a.nu, c.dy);
  // D Delta3 X G - (1/eps) Delta3 Phi + Delta3 Delta2^{-1} div N - mu Delta3^2 X - Delta3 f_chi,
  // restricted to k3 != 0 (the rigid lid has no barotropic divergence)
  d.chi = {m(m(T.chi, c.lap3), c.interior), -1.0 * eps_div(m(U.phi, c.lap3), eps),
           m(m(m(div, c.inv_lap2), c.lap3), c.interior), -mu * m(m(m(U.chi, c.lap3), c.lap3), c.interior),
           -1.0 * m(konst(c.f_chi, c.lap3), c.interior)};
  // D Phi_zz G + (1/eps) Delta3 X + d_zz Delta2^{-1} curl N + P_z d_z N_rho
  //   - mu Delta3 Phi_zz - d_zz f_phi
  d.phi = {m(m(T.phi, c.dzz), c.interior), eps_div(m(U.chi, c.lap3), eps),
           m(m(m(curl, c.inv_lap2), c.dzz), c.interior), m(m(dz(a.nrho), c.pz), c.interior),
           -mu * m(m(m(U.phi, c.dzz), c.lap3), c.interior), -1.0 * m(konst(c.f_phi_zz, c.pz), c.interior)};
  return d;
}

BandPoly sum(const std::vector<BandPoly>& t) {
  BandPoly s = t.front();
  for (std::size_t i = 1; i < t.size(); ++i) s += t[i];
  return s;
}

/// zero the top order: a 1/eps term in a formal run is not known there
BandPoly drop_top(BandPoly a) {
  const JetLayout& l = *a.layout;
  if (!l.formal) return a;
  cplx* c = a.comp(l.comp(0, l.count[0] - 1));
  std::fill(c, c + a.nb(), cplx(0.0));
  return a;
}

ResidualTriple evaluate_triple(const BalanceContext& c, int n, const Series& s) {
  const BandSpace& sp = c.space();
  const double eps = c.eps();
  ResidualTriple r;
  r.n = n;
  r.r_vbar_u = sp.expand(evaluate(s.vu, eps), Parity::odd);
  r.r_vbar_v = sp.expand(evaluate(s.vv, eps), Parity::odd);
  r.r_chi = sp.expand(evaluate(s.chi, eps), Parity::even);
  r.r_phi = sp.expand(evaluate(s.phi, eps), Parity::even);
  finish_residual(r, c.schedule().s);
  return r;
}

void check_run_level(const BalanceRun& run, int n) {
  if (n < 0 || n + 1 >= static_cast<int>(run.jets.size()))
    throw Error("residual: level " + std::to_string(n) + " needs levels n and n+1 in the run");
}

}  // namespace

void finish_residual(ResidualTriple& r, double s) {
  r.vbar_0 = pair_l2(r.r_vbar_u, r.r_vbar_v);
  r.chi_0 = l2_norm(r.r_chi);
  r.phi_0 = l2_norm(r.r_phi);
  r.vbar_s = pair_norm(r.r_vbar_u, r.r_vbar_v, s);
  r.chi_s = sobolev_norm(r.r_chi, s);
  r.phi_s = sobolev_norm(r.r_phi, s);
}

ResidualTriple residual_from_levels(const BalanceSet& Bn, const BalanceSet& Bn1, const Schedule& sch) {
  if (Bn1.n != Bn.n + 1)
    throw Error("residual_from_levels: levels " + std::to_string(Bn.n) + " and " + std::to_string(Bn1.n) +
                " are not consecutive");
  const double k = 1.0 / sch.eps;
  ResidualTriple r;
  r.n = Bn.n;
  r.r_vbar_u = dz(Bn1.vbar_v - Bn.vbar_v) * k;
  r.r_vbar_v = dz(Bn.vbar_u - Bn1.vbar_u) * k;
  r.r_chi = laplacian3(Bn1.Phi - Bn.Phi) * k;
  r.r_phi = laplacian3(Bn.X - Bn1.X) * k;
  finish_residual(r, sch.s);
  return r;
}

std::vector<ResidualTriple> residuals(const BalanceRun& run) {
  std::vector<ResidualTriple> out;
  for (int n = 0; n + 1 < static_cast<int>(run.jets.size()); ++n)
    out.push_back(evaluate_triple(*run.context, n, level_difference(run, n)));
  return out;
}

ResidualTriple residual_direct(const BalanceRun& run, int n) {
  if (n < 0 || n >= static_cast<int>(run.jets.size())) throw Error("residual_direct: level not computed");
  const DirectTerms d = direct_terms(run, n);
  return evaluate_triple(*run.context, n,
                         {drop_top(sum(d.vu)), drop_top(sum(d.vv)), drop_top(sum(d.chi)), drop_top(sum(d.phi))});
}

DualReport dual_residual_check(const BalanceRun& run, int n) {
  check_run_level(run, n);
  const Series diff = level_difference(run, n);
  const DirectTerms d = direct_terms(run, n);
  const bool formal = run.context->formal();
  DualReport rep;
  rep.n = n;
  auto compare = [&](const BandPoly& lhs, const std::vector<BandPoly>& terms) {
    const BandPoly gap = lhs - sum(terms);
    const std::vector<double> g = order_max(gap);
    std::vector<double> scale = order_max(lhs);
    for (const BandPoly& t : terms) {
      const std::vector<double> m = order_max(t);
      for (std::size_t j = 0; j < scale.size(); ++j) scale[j] = std::max(scale[j], m[j]);
    }
    // in a formal run the top order of a 1/eps term is truncated
    const std::size_t top = formal ? g.size() - 1 : g.size();
    rep.orders = static_cast<int>(top);
    for (std::size_t j = 0; j < top; ++j) {
      if (scale[j] == 0) {
        if (g[j] != 0) rep.max_rel = std::numeric_limits<double>::infinity();
        continue;
      }
      rep.max_rel = std::max(rep.max_rel, g[j] / scale[j]);
    }
  };
  compare(diff.vu, d.vu);
  compare(diff.vv, d.vv);
  compare(diff.chi, d.chi);
  compare(diff.phi, d.phi);
  return rep;
}

ErrorReport balance_error(const PrimitiveState& W, const PrimitiveState& Wstar, double t) {
  ErrorReport e;
  e.t = t;
  e.err_v = std::hypot(l2_distance(W.u, Wstar.u), l2_distance(W.v, Wstar.v));
  e.err_rho = l2_distance(W.rho, Wstar.rho);
  e.combined = std::hypot(e.err_v, e.err_rho);
  return e;
}

GevreyFit gevrey_fit(const SpectralField& f, double floor) {
  const Grid& g = f.grid();
  // shell -> (max |W_k|, |k| at the max)
  std::map<int, std::pair<double, double>> shells;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    const IVec3 k = g.k_of(i);
    const int k2 = knorm2(k);
    if (k2 == 0) continue;
    const double a = std::abs(f.coeffs()[i]);
    if (a <= floor) continue;
    const double kn = std::sqrt(static_cast<double>(k2));
    auto& s = shells[static_cast<int>(kn)];
    if (a > s.first || (a == s.first && kn < s.second)) s = {a, kn};
  }
  GevreyFit fit;
  fit.shells = static_cast<int>(shells.size());
  if (fit.shells < 2) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [shell, v] : shells) {
    const double x = v.second, y = std::log(v.first);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = fit.shells;
  const double den = n * sxx - sx * sx;
  if (den <= 0) return fit;
  const double slope = (n * sxy - sx * sy) / den;
  const double icpt = (sy - slope * sx) / n;
  double r2 = 0;
  for (const auto& [shell, v] : shells) {
    const double e = std::log(v.first) - (icpt + slope * v.second);
    r2 += e * e;
  }
  fit.sigma = -slope;
  fit.amplitude = std::exp(icpt);
  fit.residual = std::sqrt(r2 / n);
  fit.reliable = fit.shells >= 3;
  return fit;
}

ModeSplit mode_split(const SpectralField& f, double kappa, double sigma) {
  ModeSplit m;
  m.low = low_pass(f, kappa);
  m.high = high_pass(f, kappa);
  m.l2_high = l2_norm(m.high);
  m.tail_bound = std::numeric_limits<double>::infinity();
  if (sigma > 0) {
    const double gn = gevrey_norm(f, sigma);
    if (std::isfinite(gn)) {
      m.tail_bound = std::exp(-sigma * kappa) * gn;
      m.bound_ok = m.l2_high <= m.tail_bound;
    }
  }
  return m;
}

DiagnosticsRow::DiagnosticsRow() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  err_v = err_rho = combined = nan;
  res_vbar = res_chi = res_phi = res_aggregate_s = nan;
  sigma_fit = energy = parity_error = nan;
}

const char* diagnostics_csv_header() {
  return "run_id,eps,n,t,err_v,err_rho,combined,res_vbar,res_chi,res_phi,res_aggregate_s,sigma_fit,"
         "energy,parity_error";
}

void append_diagnostics_row(std::ostream& out, const DiagnosticsRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                r.run_id.c_str(), r.eps, r.n, r.t, r.err_v, r.err_rho, r.combined, r.res_vbar, r.res_chi,
                r.res_phi, r.res_aggregate_s, r.sigma_fit, r.energy, r.parity_error);
  out << buf;
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << diagnostics_csv_header() << "\n";
  for (const DiagnosticsRow& r : rows) append_diagnostics_row(out, r);
  if (!out) throw Error("write failed: " + path);
}

}  // namespace blab
