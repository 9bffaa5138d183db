#include "blab/pe_solver.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "blab/fft.hpp"
#include "blab/kernels.hpp"
#include "blab/norms.hpp"

namespace blab {

QxfState QxfState::zero(const Grid& g) {
  return {SpectralField(g, Parity::even), SpectralField(g, Parity::odd),
          SpectralField(g, Parity::odd), SpectralField(g, Parity::even),
          SpectralField(g, Parity::even)};
}

QxfState& QxfState::axpy(double s, const QxfState& o) {
  q.axpy(s, o.q);
  vz_u.axpy(s, o.vz_u);
  vz_v.axpy(s, o.vz_v);
  lap_chi.axpy(s, o.lap_chi);
  phi_zz.axpy(s, o.phi_zz);
  return *this;
}

QxfState& QxfState::operator*=(double s) {
  q *= s;
  vz_u *= s;
  vz_v *= s;
  lap_chi *= s;
  phi_zz *= s;
  return *this;
}

bool QxfState::finite() const {
  for (const SpectralField* f : {&q, &vz_u, &vz_v, &lap_chi, &phi_zz})
    for (const cplx& c : f->coeffs())
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

namespace {

// Structural constraints of the prognostic variables: parity, zero mean,
// dealiasing, vz on the horizontal mean only, no barotropic or horizontal-mean
// content in lap_chi and phi_zz.
void project(QxfState& s) {
  const Grid& g = s.grid();
  s.q = dealias(parity_project(s.q, Parity::even));
  s.vz_u = dealias(parity_project(s.vz_u, Parity::odd));
  s.vz_v = dealias(parity_project(s.vz_v, Parity::odd));
  s.lap_chi = dealias(parity_project(s.lap_chi, Parity::even));
  s.phi_zz = dealias(parity_project(s.phi_zz, Parity::even));
  kernels::for_each_mode(g, [&](std::size_t idx, const IVec3& k) {
    const bool hmean = k[0] == 0 && k[1] == 0;
    if (!hmean || k[2] == 0) {
      s.vz_u.coeffs()[idx] = 0;
      s.vz_v.coeffs()[idx] = 0;
    }
    if (hmean || k[2] == 0) {
      s.lap_chi.coeffs()[idx] = 0;
      s.phi_zz.coeffs()[idx] = 0;
    }
  });
  s.q.coeffs()[0] = 0;
}

void remove_barotropic(SpectralField& f) {
  const Grid& g = f.grid();
  for (int i0 = 0; i0 < g.N[0]; ++i0)
    for (int i1 = 0; i1 < g.N[1]; ++i1) f.coeffs()[g.flat(i0, i1, 0)] = 0;
}

}  // namespace

SpectralField phi_from_phizz(const SpectralField& phi_zz) {
  const Grid& g = phi_zz.grid();
  SpectralField phi(g, Parity::even);
  const int n2 = g.N[2];
  kernels::for_each_index(static_cast<std::size_t>(g.N[0]) * g.N[1], [&](std::size_t col) {
    const std::size_t base = col * n2;
    if (col == 0) return;
    cplx c = 0;
    for (int i2 = 1; i2 < n2; ++i2) {
      const double kz = g.kprime(2, g.wavenumber(2, i2));
      const cplx v = -phi_zz.coeffs()[base + i2] / (kz * kz);
      phi.coeffs()[base + i2] = v;
      c -= v;
    }
    phi.coeffs()[base] = c;
  });
  return phi;
}

QxfState to_qxf(const QGDecomposition& d) {
  QxfState s{d.q, dz(d.vbar_u), dz(d.vbar_v), laplacian3(d.chi), dzz(d.phi)};
  remove_barotropic(s.lap_chi);
  project(s);
  return s;
}

QGDecomposition from_qxf(const QxfState& s) {
  QGDecomposition d;
  d.q = s.q;
  d.vbar_u = inv_dz(s.vz_u);
  d.vbar_v = inv_dz(s.vz_v);
  d.chi = inv_laplacian3(s.lap_chi);
  d.phi = phi_from_phizz(s.phi_zz);
  d.q.set_parity(Parity::even);
  for (SpectralField* f : {&d.vbar_u, &d.vbar_v, &d.chi, &d.phi}) f->set_parity(Parity::even);
  return d;
}

Advection advect(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                 const SpectralField& rho) {
  const Grid& g = u.grid();
  const Shape M = product_shape(g);
  const std::size_t n = shape_size(M);
  const std::vector<double> pu = to_physical(u, M), pv = to_physical(v, M), pw = to_physical(w, M);
  auto transport = [&](const SpectralField& f, Parity p) {
    std::vector<double> acc(n, 0.0);
    kernels::mul_acc(pu.data(), to_physical(dx(f), M).data(), acc.data(), n);
    kernels::mul_acc(pv.data(), to_physical(dy(f), M).data(), acc.data(), n);
    kernels::mul_acc(pw.data(), to_physical(dz(f), M).data(), acc.data(), n);
    return from_physical(acc, M, g, p);
  };
  Advection a{transport(u, Parity::even), transport(v, Parity::even), transport(rho, Parity::odd)};
  for (SpectralField* f : {&a.nu, &a.nv, &a.nrho}) *f = zero_mean(*f);
  return a;
}

PrimitiveState skew_tendency(const PrimitiveState& W, const Schedule& sch) {
  const Reconstruction r = reconstruct(decompose(W));
  const double ie = 1.0 / sch.eps;
  // v_perp = (-v, u)
  PrimitiveState t{-ie * (dx(r.p) - W.v), -ie * (dy(r.p) + W.u), ie * r.w};
  remove_barotropic_divergence(t.u, t.v);
  t.u.set_parity(Parity::even);
  t.v.set_parity(Parity::even);
  t.rho.set_parity(Parity::odd);
  return t;
}

PrimitiveState rhs_primitive(const PrimitiveState& W, const Schedule& sch, const ForcingSet& f,
                             const RhsOptions& opt) {
  const Grid& g = W.grid();
  PrimitiveState t = PrimitiveState::zero(g);
  const Reconstruction r = reconstruct(decompose(W));
  if (opt.linear) {
    const double ie = 1.0 / sch.eps;
    t.u = -ie * (dx(r.p) - W.v) + sch.mu * laplacian3(W.u);
    t.v = -ie * (dy(r.p) + W.u) + sch.mu * laplacian3(W.v);
    t.rho = ie * r.w + sch.mu * laplacian3(W.rho);
  }
  if (opt.nonlinear) {
    const Advection a = advect(W.u, W.v, r.w, W.rho);
    t.u -= a.nu;
    t.v -= a.nv;
    t.rho -= a.nrho;
  }
  if (opt.forcing) {
    t.u += f.fu;
    t.v += f.fv;
    t.rho += f.frho;
  }
  remove_barotropic_divergence(t.u, t.v);
  t.u = zero_mean(dealias(parity_project(t.u, Parity::even)));
  t.v = zero_mean(dealias(parity_project(t.v, Parity::even)));
  t.rho = zero_mean(dealias(parity_project(t.rho, Parity::odd)));
  return t;
}

QxfState rhs_qxf(const QGDecomposition& d, const Schedule& sch, const ForcingSet& f,
                 const RhsOptions& opt) {
  const Grid& g = d.grid();
  QxfState t = QxfState::zero(g);
  const double ie = 1.0 / sch.eps, mu = sch.mu;
  if (opt.linear) {
    const SpectralField vz_u = dz(d.vbar_u), vz_v = dz(d.vbar_v);
    const SpectralField lap_chi = laplacian3(d.chi), phi_zz = dzz(d.phi);
    t.q = mu * laplacian3(d.q);
    // d_t vz + (1/eps) vz_perp = ..., vz_perp = (-vz_v, vz_u)
    t.vz_u = ie * vz_v + mu * dzz(vz_u);
    t.vz_v = -ie * vz_u + mu * dzz(vz_v);
    t.lap_chi = ie * laplacian3(d.phi) + mu * laplacian3(lap_chi);
    t.phi_zz = -ie * lap_chi + mu * laplacian3(phi_zz);
  }
  if (opt.nonlinear) {
    const Reconstruction r = reconstruct(d);
    const Advection a = advect(r.W.u, r.W.v, r.w, r.W.rho);
    const SpectralField curl = curl2(a.nu, a.nv);
    t.q -= curl - dz(a.nrho);
    t.vz_u -= dz(xy_average(a.nu));
    t.vz_v -= dz(xy_average(a.nv));
    t.lap_chi -= laplacian3(inv_laplacian2(div2(a.nu, a.nv)));
    t.phi_zz -= dzz(inv_laplacian2(curl)) + pz_project(dz(a.nrho));
  }
  if (opt.forcing) {
    t.q += f.f_q;
    t.vz_u += dz(f.fbar_u);
    t.vz_v += dz(f.fbar_v);
    t.lap_chi += laplacian3(f.f_chi);
    t.phi_zz += f.f_phi_zz;
  }
  remove_barotropic(t.lap_chi);
  project(t);
  return t;
}

QxfState rhs_qxf(const QxfState& s, const Schedule& sch, const ForcingSet& f,
                 const RhsOptions& opt) {
  return rhs_qxf(from_qxf(s), sch, f, opt);
}

void apply_propagator(QxfState& s, const Schedule& sch, double h) {
  const Grid& g = s.grid();
  const double eps = sch.eps, mu = sch.mu;
  const double ch = std::cos(h / eps), sh = std::sin(h / eps);
  kernels::for_each_mode(g, [&](std::size_t idx, const IVec3& k) {
    const double a = g.kprime(0, k[0]), b = g.kprime(1, k[1]), c = g.kprime(2, k[2]);
    const double k2 = a * a + b * b + c * c;
    const double decay = std::exp(-mu * k2 * h);
    s.q.coeffs()[idx] *= decay;
    if (k[0] == 0 && k[1] == 0) {
      const cplx u = s.vz_u.coeffs()[idx], v = s.vz_v.coeffs()[idx];
      s.vz_u.coeffs()[idx] = decay * (ch * u + sh * v);
      s.vz_v.coeffs()[idx] = decay * (-sh * u + ch * v);
      return;
    }
    if (k[2] == 0) {
      s.lap_chi.coeffs()[idx] *= decay;
      s.phi_zz.coeffs()[idx] *= decay;
      return;
    }
    const double alpha = std::sqrt(k2) / std::abs(c);
    const double w = alpha / eps * h;
    const double cw = std::cos(w), sw = std::sin(w);
    const cplx X = s.lap_chi.coeffs()[idx], F = s.phi_zz.coeffs()[idx];
    s.lap_chi.coeffs()[idx] = decay * (cw * X + alpha * sw * F);
    s.phi_zz.coeffs()[idx] = decay * (cw * F - sw / alpha * X);
  });
}

double min_vertical_ratio(const Grid& g) {
  double r = 1;
  for (int k0 = -g.dealias_max(0); k0 <= g.dealias_max(0); ++k0)
    for (int k1 = -g.dealias_max(1); k1 <= g.dealias_max(1); ++k1)
      for (int k2 = 1; k2 <= g.dealias_max(2); ++k2) {
        const double a = g.kprime(0, k0), b = g.kprime(1, k1), c = g.kprime(2, k2);
        r = std::min(r, c / std::sqrt(a * a + b * b + c * c));
      }
  return r;
}

StepperConfig StepperConfig::make_default(const Grid& g, const Schedule& sch, double t_end) {
  StepperConfig cfg;
  cfg.dt = 0.25 * sch.eps * std::min(1.0, min_vertical_ratio(g));
  cfg.t_end = t_end;
  return cfg;
}

void StepperConfig::validate(const Grid& g, const Schedule& sch) const {
  if (!(dt > 0)) throw Error("stepper: dt must be positive");
  if (!(t_end >= 0)) throw Error("stepper: t_end must be nonnegative");
  const double lim = 0.5 * sch.eps * min_vertical_ratio(g);
  if (dt > lim * (1 + 1e-12))
    throw Error("stepper: dt=" + std::to_string(dt) + " exceeds the gravity-wave limit " +
                std::to_string(lim));
  if (dt > 0.5 * sch.eps * (1 + 1e-12)) throw Error("stepper: dt exceeds the inertial limit eps/2");
}

namespace {

QxfState nonlinear_part(const QxfState& s, const Schedule& sch, const StepperConfig& cfg,
                        const ForcingSet& f) {
  RhsOptions o = cfg.rhs;
  o.linear = false;
  return rhs_qxf(s, sch, f, o);
}

QxfState propagated(QxfState s, const Schedule& sch, double h) {
  apply_propagator(s, sch, h);
  return s;
}

}  // namespace

QxfState step(const QxfState& y, const Schedule& sch, const StepperConfig& cfg,
              const ForcingSet& f) {
  const double h = cfg.dt;
  QxfState out = y;
  if (cfg.scheme == Scheme::if_rk2) {
    const QxfState k1 = nonlinear_part(y, sch, cfg, f);
    QxfState y1 = y;
    y1.axpy(h, k1);
    apply_propagator(y1, sch, h);
    const QxfState k2 = nonlinear_part(y1, sch, cfg, f);
    out.axpy(0.5 * h, k1);
    apply_propagator(out, sch, h);
    out.axpy(0.5 * h, k2);
  } else {
    const QxfState k1 = nonlinear_part(y, sch, cfg, f);
    const QxfState eh2_y = propagated(y, sch, 0.5 * h);
    QxfState ya = y;
    ya.axpy(0.5 * h, k1);
    apply_propagator(ya, sch, 0.5 * h);
    const QxfState k2 = nonlinear_part(ya, sch, cfg, f);
    QxfState yb = eh2_y;
    yb.axpy(0.5 * h, k2);
    const QxfState k3 = nonlinear_part(yb, sch, cfg, f);
    QxfState yc = propagated(eh2_y, sch, 0.5 * h);
    const QxfState e_k3 = propagated(k3, sch, 0.5 * h);
    yc.axpy(h, e_k3);
    const QxfState k4 = nonlinear_part(yc, sch, cfg, f);
    // y_{n+1} = E(h) y + h/6 [E(h) k1 + 2 E(h/2)(k2 + k3) + k4]
    QxfState mid = k2;
    mid.axpy(1.0, k3);
    apply_propagator(mid, sch, 0.5 * h);
    out = propagated(y, sch, h);
    out.axpy(h / 6, propagated(k1, sch, h));
    out.axpy(h / 3, mid);
    out.axpy(h / 6, k4);
  }
  project(out);
  return out;
}

TrajectoryRow trajectory_row(double t, const PrimitiveState& W) {
  const double v2 = inner(W.u, W.u) + inner(W.v, W.v);
  const double r2 = inner(W.rho, W.rho);
  return {t, std::sqrt(v2), std::sqrt(r2), 0.5 * (v2 + r2), parity_error(W)};
}

Trajectory integrate(const PrimitiveState& W0, const Schedule& sch, const StepperConfig& cfg,
                     const ForcingSet& f, int output_every, const Observer& observe) {
  const Grid& g = W0.grid();
  cfg.validate(g, sch);
  if (output_every < 1) throw Error("integrate: output_every must be >= 1");
  const long nsteps = cfg.t_end == 0 ? 0 : static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  StepperConfig c = cfg;
  if (nsteps > 0) c.dt = cfg.t_end / static_cast<double>(nsteps);

  Trajectory tr;
  QxfState s = to_qxf(decompose(W0));
  auto emit = [&](double t) {
    const PrimitiveState W = reconstruct(from_qxf(s)).W;
    tr.rows.push_back(trajectory_row(t, W));
    if (observe) observe(t, W);
  };
  emit(0.0);
  for (long i = 1; i <= nsteps; ++i) {
    QxfState next = step(s, sch, c, f);
    const double t = i * c.dt;
    if (!next.finite())
      throw BlowUp("integrate: non-finite state at t=" + std::to_string(t), s, t - c.dt);
    s = std::move(next);
    if (i % output_every == 0 || i == nsteps) emit(t);
  }
  tr.final_state = s;
  return tr;
}

void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryRow>& rows) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << "t,v_l2,rho_l2,energy,parity_error\n" << std::setprecision(17);
  for (const auto& r : rows)
    os << r.t << ',' << r.v_l2 << ',' << r.rho_l2 << ',' << r.energy << ',' << r.parity_error << '\n';
}

}  // namespace blab
