#include "blab/operators.hpp"

#include <cmath>
#include <vector>

#include "blab/kernels.hpp"

namespace blab {
namespace {

const cplx I(0.0, 1.0);

template <class M>
SpectralField apply(const SpectralField& f, Parity out, M&& mult) {
  SpectralField g(f.grid(), out);
  const Grid& gr = f.grid();
  kernels::for_each_mode(gr, [&](std::size_t idx, const IVec3& k) {
    g.coeffs()[idx] = mult(k) * f.coeffs()[idx];
  });
  return g;
}

}  // namespace

SpectralField dx(const SpectralField& f) {
  const Grid& g = f.grid();
  return apply(f, f.parity(), [&](const IVec3& k) { return I * g.kprime(0, k[0]); });
}

SpectralField dy(const SpectralField& f) {
  const Grid& g = f.grid();
  return apply(f, f.parity(), [&](const IVec3& k) { return I * g.kprime(1, k[1]); });
}

SpectralField dz(const SpectralField& f) {
  const Grid& g = f.grid();
  return apply(f, flip(f.parity()), [&](const IVec3& k) { return I * g.kprime(2, k[2]); });
}

SpectralField dzz(const SpectralField& f) {
  const Grid& g = f.grid();
  return apply(f, f.parity(), [&](const IVec3& k) {
    const double kz = g.kprime(2, k[2]);
    return cplx(-kz * kz);
  });
}

FieldPair grad2(const SpectralField& f) { return {dx(f), dy(f)}; }
FieldTriple grad3(const SpectralField& f) { return {dx(f), dy(f), dz(f)}; }
FieldPair perp_grad(const SpectralField& f) { return {-dy(f), dx(f)}; }

SpectralField div2(const SpectralField& a, const SpectralField& b) { return dx(a) + dy(b); }
SpectralField curl2(const SpectralField& a, const SpectralField& b) { return dx(b) - dy(a); }

SpectralField laplacian2(const SpectralField& f) {
  const Grid& g = f.grid();
  return apply(f, f.parity(), [&](const IVec3& k) {
    const double a = g.kprime(0, k[0]), b = g.kprime(1, k[1]);
    return cplx(-(a * a + b * b));
  });
}

SpectralField laplacian3(const SpectralField& f) {
  const Grid& g = f.grid();
  return apply(f, f.parity(), [&](const IVec3& k) {
    const double a = g.kprime(0, k[0]), b = g.kprime(1, k[1]), c = g.kprime(2, k[2]);
    return cplx(-(a * a + b * b + c * c));
  });
}

SpectralField inv_laplacian2(const SpectralField& f) {
  const Grid& g = f.grid();
  return apply(f, f.parity(), [&](const IVec3& k) {
    if (k[0] == 0 && k[1] == 0) return cplx(0.0);
    const double a = g.kprime(0, k[0]), b = g.kprime(1, k[1]);
    return cplx(-1.0 / (a * a + b * b));
  });
}

SpectralField inv_laplacian3(const SpectralField& f) {
  const Grid& g = f.grid();
  return apply(f, f.parity(), [&](const IVec3& k) {
    if (k[0] == 0 && k[1] == 0 && k[2] == 0) return cplx(0.0);
    const double a = g.kprime(0, k[0]), b = g.kprime(1, k[1]), c = g.kprime(2, k[2]);
    return cplx(-1.0 / (a * a + b * b + c * c));
  });
}

SpectralField vertical_integral(const SpectralField& f) {
  const Grid& g = f.grid();
  double scale = f.max_abs(), bt = 0;
  for (int i0 = 0; i0 < g.N[0]; ++i0)
    for (int i1 = 0; i1 < g.N[1]; ++i1) bt = std::max(bt, std::abs(f.coeffs()[g.flat(i0, i1, 0)]));
  if (bt > 1e-12 * scale && bt > 0)
    throw Error("vertical_integral: input has k3=0 content (non-periodic primitive)");

  SpectralField out(g, flip(f.parity()));
  const int n2 = g.N[2];
  kernels::for_each_index(static_cast<std::size_t>(g.N[0]) * g.N[1], [&](std::size_t col) {
    const std::size_t base = col * n2;
    cplx c = 0;
    for (int i2 = 1; i2 < n2; ++i2) {
      const int k3 = g.wavenumber(2, i2);
      if (2 * std::abs(k3) >= n2) continue;
      const cplx v = f.coeffs()[base + i2] / (I * g.kprime(2, k3));
      out.coeffs()[base + i2] = v;
      c -= v;
    }
    out.coeffs()[base] = col == 0 ? cplx(0.0) : c;
  });
  return out;
}

SpectralField inv_dz(const SpectralField& f) {
  const Grid& g = f.grid();
  return apply(f, flip(f.parity()), [&](const IVec3& k) {
    if (k[2] == 0) return cplx(0.0);
    return 1.0 / (I * g.kprime(2, k[2]));
  });
}

SpectralField xy_average(const SpectralField& f) {
  return apply(f, f.parity(),
               [](const IVec3& k) { return cplx(k[0] == 0 && k[1] == 0 ? 1.0 : 0.0); });
}

SpectralField pz_project(const SpectralField& f) {
  return apply(f, f.parity(),
               [](const IVec3& k) { return cplx(k[0] == 0 && k[1] == 0 ? 0.0 : 1.0); });
}

SpectralField low_pass(const SpectralField& f, double kappa) {
  const double k2max = kappa * kappa;
  return apply(f, f.parity(), [&](const IVec3& k) { return cplx(knorm2(k) < k2max ? 1.0 : 0.0); });
}

SpectralField high_pass(const SpectralField& f, double kappa) {
  const double k2max = kappa * kappa;
  return apply(f, f.parity(), [&](const IVec3& k) { return cplx(knorm2(k) < k2max ? 0.0 : 1.0); });
}

SpectralField parity_project(const SpectralField& f, Parity p) {
  if (p == Parity::none) return f;
  const Grid& g = f.grid();
  SpectralField out(g, p);
  const double sgn = p == Parity::even ? 1.0 : -1.0;
  kernels::for_each_mode(g, [&](std::size_t idx, const IVec3& k) {
    const IVec3 m{k[0], k[1], -k[2]};
    if (!g.representable(m)) return;
    out.coeffs()[idx] = 0.5 * (f.coeffs()[idx] + sgn * f.coeffs()[g.flat_k(m)]);
  });
  return out;
}

SpectralField dealias(const SpectralField& f) {
  const Grid& g = f.grid();
  return apply(f, f.parity(), [&](const IVec3& k) { return cplx(g.dealiased(k) ? 1.0 : 0.0); });
}

SpectralField zero_mean(const SpectralField& f) {
  SpectralField g = f;
  g.coeffs()[0] = 0.0;
  return g;
}

SpectralField hermitian_project(const SpectralField& f) {
  const Grid& g = f.grid();
  SpectralField out(g, f.parity());
  kernels::for_each_mode(g, [&](std::size_t idx, const IVec3& k) {
    const IVec3 m{-k[0], -k[1], -k[2]};
    if (!g.representable(k)) return;
    out.coeffs()[idx] = 0.5 * (f.coeffs()[idx] + std::conj(f.coeffs()[g.flat_k(m)]));
  });
  return out;
}

}  // namespace blab
