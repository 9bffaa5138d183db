#include "blab/norms.hpp"

#include <cmath>
#include <limits>

#include "blab/operators.hpp"

namespace blab {

// Reductions run serially in storage order so results are bitwise
// reproducible regardless of thread count.

double l2_norm(const SpectralField& f) {
  double s = 0;
  for (const auto& c : f.coeffs()) s += std::norm(c);
  return std::sqrt(s);
}

double sobolev_norm(const SpectralField& f, double s) {
  const Grid& g = f.grid();
  double acc = 0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const cplx c = f.coeffs()[idx];
    if (c == cplx(0.0)) continue;
    const IVec3 k = g.k_of(idx);
    const double a = g.kprime(0, k[0]), b = g.kprime(1, k[1]), z = g.kprime(2, k[2]);
    acc += std::pow(1 + a * a + b * b + z * z, s) * std::norm(c);
  }
  return std::sqrt(acc);
}

double gevrey_norm(const SpectralField& f, double sigma) {
  const Grid& g = f.grid();
  double acc = 0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const double m = std::norm(f.coeffs()[idx]);
    if (m == 0) continue;
    const double kn = std::sqrt(static_cast<double>(knorm2(g.k_of(idx))));
    // log-domain guard against overflow of e^{2 sigma |k|} |W_k|^2
    const double lg = 2 * sigma * kn + std::log(m);
    if (lg > std::log(std::numeric_limits<double>::max()))
      return std::numeric_limits<double>::infinity();
    acc += std::exp(lg);
    if (!std::isfinite(acc)) return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(acc);
}

NormReport norms(const SpectralField& f, double s, double sigma) {
  return {sobolev_norm(f, s), gevrey_norm(f, sigma), l2_norm(f)};
}

double inner(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  // Neumaier summation: skew tendencies are O(1/eps) and cancel to ~0
  double s = 0, c = 0;
  auto add = [&](double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    add(a.coeffs()[i].real() * b.coeffs()[i].real());
    add(a.coeffs()[i].imag() * b.coeffs()[i].imag());
  }
  return s + c;
}

double parity_error(const SpectralField& f) {
  if (f.parity() == Parity::none) return 0;
  const Grid& g = f.grid();
  const double sgn = f.parity() == Parity::even ? -1.0 : 1.0;
  double e = 0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const IVec3 k = g.k_of(idx);
    const IVec3 m{k[0], k[1], -k[2]};
    if (!g.representable(m)) continue;
    e = std::max(e, std::abs(f.coeffs()[idx] + sgn * f.coeffs()[g.flat_k(m)]));
  }
  return e;
}

}  // namespace blab
