#include "blab/decomposition.hpp"

#include <algorithm>

#include "blab/kernels.hpp"
#include "blab/norms.hpp"

namespace blab {

PrimitiveState PrimitiveState::zero(const Grid& g) {
  return {SpectralField(g, Parity::even), SpectralField(g, Parity::even),
          SpectralField(g, Parity::odd)};
}

PrimitiveState& PrimitiveState::operator+=(const PrimitiveState& o) {
  u += o.u;
  v += o.v;
  rho += o.rho;
  return *this;
}

PrimitiveState& PrimitiveState::axpy(double s, const PrimitiveState& o) {
  u.axpy(s, o.u);
  v.axpy(s, o.v);
  rho.axpy(s, o.rho);
  return *this;
}

QGDecomposition QGDecomposition::zero(const Grid& g) {
  return {SpectralField(g, Parity::even), SpectralField(g, Parity::even),
          SpectralField(g, Parity::even), SpectralField(g, Parity::even),
          SpectralField(g, Parity::even)};
}

bool ForcingSet::is_zero() const { return fu.is_zero() && fv.is_zero() && frho.is_zero(); }

namespace {

void check_parity(const SpectralField& f, Parity want, const char* name, double tol) {
  SpectralField tagged = f;
  tagged.set_parity(want);
  const double e = parity_error(tagged);
  if (e > tol * std::max(1.0, f.max_abs()))
    throw Error(std::string("state: component ") + name + " is not " + parity_name(want) +
                " in z (parity error " + std::to_string(e) + ")");
}

double barotropic_divergence(const SpectralField& a, const SpectralField& b) {
  const Grid& g = a.grid();
  double m = 0;
  for (int i0 = 0; i0 < g.N[0]; ++i0)
    for (int i1 = 0; i1 < g.N[1]; ++i1) {
      const std::size_t idx = g.flat(i0, i1, 0);
      const double kx = g.kprime(0, g.wavenumber(0, i0)), ky = g.kprime(1, g.wavenumber(1, i1));
      m = std::max(m, std::abs(kx * a.coeffs()[idx] + ky * b.coeffs()[idx]));
    }
  return m;
}

}  // namespace

void check_state(const PrimitiveState& W, double tol) {
  require_same_grid(W.u.grid(), W.v.grid(), "check_state");
  require_same_grid(W.u.grid(), W.rho.grid(), "check_state");
  check_parity(W.u, Parity::even, "u", tol);
  check_parity(W.v, Parity::even, "v", tol);
  check_parity(W.rho, Parity::odd, "rho", tol);
  const double scale = std::max({1.0, W.u.max_abs(), W.v.max_abs()});
  if (barotropic_divergence(W.u, W.v) > tol * scale)
    throw Error("state: barotropic divergence is nonzero (rigid lid requires div of the z-mean to vanish)");
}

QGDecomposition decompose(const PrimitiveState& W) {
  check_state(W);
  QGDecomposition d;
  d.q = parity_project(zero_mean(curl2(W.u, W.v) - dz(W.rho)), Parity::even);
  d.vbar_u = zero_mean(xy_average(W.u));
  d.vbar_v = zero_mean(xy_average(W.v));
  d.chi = inv_laplacian2(div2(W.u, W.v));
  // The integrand is odd in z, so the primitive is even.
  SpectralField integrand = parity_project(inv_laplacian2(laplacian3(W.rho) + dz(d.q)), Parity::odd);
  d.phi = vertical_integral(integrand);
  d.vbar_u.set_parity(Parity::even);
  d.vbar_v.set_parity(Parity::even);
  d.chi.set_parity(Parity::even);
  return d;
}

Reconstruction reconstruct(const QGDecomposition& d) {
  const SpectralField psi = inv_laplacian3(d.q + dzz(d.phi));
  Reconstruction r;
  r.W.u = zero_mean(d.vbar_u - dy(psi) + dx(d.chi));
  r.W.v = zero_mean(d.vbar_v + dx(psi) + dy(d.chi));
  r.p = zero_mean(psi - d.phi);
  r.W.rho = -dz(r.p);
  r.w = -vertical_integral(laplacian2(d.chi));
  r.W.u.set_parity(Parity::even);
  r.W.v.set_parity(Parity::even);
  r.W.rho.set_parity(Parity::odd);
  r.p.set_parity(Parity::even);
  r.w.set_parity(Parity::odd);
  return r;
}

ForcingSet derive_forcings(const SpectralField& fu, const SpectralField& fv,
                           const SpectralField& frho) {
  check_parity(fu, Parity::even, "f_v (x)", 1e-12);
  check_parity(fv, Parity::even, "f_v (y)", 1e-12);
  check_parity(frho, Parity::odd, "f_rho", 1e-12);
  ForcingSet f;
  f.fu = zero_mean(fu);
  f.fv = zero_mean(fv);
  f.frho = zero_mean(frho);
  f.fu.set_parity(Parity::even);
  f.fv.set_parity(Parity::even);
  f.frho.set_parity(Parity::odd);
  const SpectralField curl = curl2(f.fu, f.fv);
  f.f_q = curl - dz(f.frho);
  f.f_chi = inv_laplacian2(div2(f.fu, f.fv));
  f.fbar_u = xy_average(f.fu);
  f.fbar_v = xy_average(f.fv);
  f.f_phi_zz = inv_laplacian2(dzz(curl)) + pz_project(dz(f.frho));
  f.f_q.set_parity(Parity::even);
  f.f_chi.set_parity(Parity::even);
  f.f_phi_zz.set_parity(Parity::even);
  return f;
}

ForcingSet zero_forcing(const Grid& g) {
  return derive_forcings(SpectralField(g, Parity::even), SpectralField(g, Parity::even),
                         SpectralField(g, Parity::odd));
}

void remove_barotropic_divergence(SpectralField& a, SpectralField& b) {
  const Grid& g = a.grid();
  for (int i0 = 0; i0 < g.N[0]; ++i0)
    for (int i1 = 0; i1 < g.N[1]; ++i1) {
      const double kx = g.kprime(0, g.wavenumber(0, i0)), ky = g.kprime(1, g.wavenumber(1, i1));
      const double kh2 = kx * kx + ky * ky;
      if (kh2 == 0) continue;
      const std::size_t idx = g.flat(i0, i1, 0);
      const cplx proj = (kx * a.coeffs()[idx] + ky * b.coeffs()[idx]) / kh2;
      a.coeffs()[idx] -= kx * proj;
      b.coeffs()[idx] -= ky * proj;
    }
}

double energy(const PrimitiveState& W) {
  return 0.5 * (inner(W.u, W.u) + inner(W.v, W.v) + inner(W.rho, W.rho));
}

double parity_error(const PrimitiveState& W) {
  return std::max({parity_error(W.u), parity_error(W.v), parity_error(W.rho)});
}

}  // namespace blab
