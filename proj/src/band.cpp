#include "blab/band.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

namespace blab {

int JetLayout::weight(unsigned S) const { return std::popcount(S & weighted); }

namespace {

LayoutPtr build_layout(int dims, unsigned weighted, int P, bool formal) {
  if (dims < 0 || dims > 12) throw Error("jet: unsupported number of directions");
  auto l = std::make_shared<JetLayout>();
  l->dims = dims;
  l->weighted = weighted;
  l->P = formal ? P : 0;
  l->formal = formal;
  const unsigned nsub = 1u << dims;
  l->offset.resize(nsub);
  l->count.resize(nsub);
  int off = 0;
  for (unsigned S = 0; S < nsub; ++S) {
    l->offset[S] = off;
    l->count[S] = formal ? std::max(0, P - l->weight(S) + 1) : 1;
    off += l->count[S];
  }
  l->ncomp = off;
  for (unsigned S = 0; S < nsub; ++S)
    for (int j = 0; j < l->count[S]; ++j) {
      const int out = l->comp(S, j);
      // all splits S = T + (S \ T), T running over subsets of S
      for (unsigned T = S;; T = (T - 1) & S) {
        const unsigned U = S ^ T;
        for (int i = 0; i <= j; ++i)
          if (i < l->count[T] && j - i < l->count[U])
            l->pairs.push_back({out, l->comp(T, i), l->comp(U, j - i)});
        if (T == 0) break;
      }
    }
  return l;
}

}  // namespace

LayoutPtr jet_layout(int dims, unsigned weighted, int P, bool formal) {
  static std::mutex m;
  static std::map<std::tuple<int, unsigned, int, bool>, LayoutPtr> cache;
  if (!formal) {
    weighted = 0;
    P = 0;
  }
  if (formal && P < 0) throw Error("jet: negative truncation order");
  std::lock_guard<std::mutex> lock(m);
  auto key = std::make_tuple(dims, weighted, P, formal);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  return cache.emplace(key, build_layout(dims, weighted, P, formal)).first->second;
}

LayoutPtr numeric_layout(int dims) { return jet_layout(dims, 0, 0, false); }

LayoutPtr extended_layout(const JetLayout& l, bool weighted) {
  return jet_layout(l.dims + 1, l.weighted | (weighted ? 1u << l.dims : 0u), l.P, l.formal);
}

LayoutPtr reduced_layout(const JetLayout& l) {
  if (l.dims == 0) throw Error("jet: no direction to remove");
  return jet_layout(l.dims - 1, l.weighted & ~(1u << (l.dims - 1)), l.P, l.formal);
}

// ---------------------------------------------------------------------------

BandSpace::BandSpace(const Grid& g, double kappa) : grid_(g), kappa_(kappa) {
  g.validate();
  if (!(kappa > 0)) throw Error("band: kappa must be positive");
  const double k2max = kappa * kappa;
  int K = 0;
  while ((K + 1) * (K + 1) < k2max) ++K;
  for (int a = 0; a < 3; ++a)
    if (K > g.dealias_max(a))
      throw Error("band: grid too coarse for kappa=" + std::to_string(kappa) +
                  " (need dealiased modes up to " + std::to_string(K) + ")");
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b)
      for (int c = -K; c <= K; ++c) {
        const IVec3 k{a, b, c};
        if (a * a + b * b + c * c < k2max) modes_.push_back(k);
      }
  std::map<IVec3, std::size_t> index;
  for (std::size_t i = 0; i < modes_.size(); ++i) index[modes_[i]] = i;
  for (const IVec3& k : modes_) {
    kp_.push_back({g.kprime(0, k[0]), g.kprime(1, k[1]), g.kprime(2, k[2])});
    neg_.push_back(index.at(IVec3{-k[0], -k[1], -k[2]}));
  }
  const int m = smooth_size(3 * K + 1);
  M_ = {m, m, m};
  const int h = M_[2] / 2 + 1;
  for (const IVec3& k : modes_) {
    const bool conj = k[2] < 0;
    const IVec3 r = conj ? IVec3{-k[0], -k[1], -k[2]} : k;
    const int i0 = r[0] >= 0 ? r[0] : r[0] + M_[0];
    const int i1 = r[1] >= 0 ? r[1] : r[1] + M_[1];
    half_idx_.push_back((static_cast<std::size_t>(i0) * M_[1] + i1) * h + r[2]);
    half_conj_.push_back(conj ? 1 : 0);
  }
}

std::size_t BandSpace::half_size() const {
  return static_cast<std::size_t>(M_[0]) * M_[1] * (M_[2] / 2 + 1);
}

std::vector<cplx> BandSpace::restrict(const SpectralField& f) const {
  require_same_grid(f.grid(), grid_, "band restrict");
  std::vector<cplx> c(size());
  for (std::size_t i = 0; i < size(); ++i) c[i] = f.coeffs()[grid_.flat_k(modes_[i])];
  return c;
}

SpectralField BandSpace::expand(const std::vector<cplx>& c, Parity p) const {
  if (c.size() != size()) throw Error("band expand: size mismatch");
  SpectralField f(grid_, p);
  for (std::size_t i = 0; i < size(); ++i) f.coeffs()[grid_.flat_k(modes_[i])] = c[i];
  return f;
}

// ---------------------------------------------------------------------------

namespace {

void require_same(const BandPoly& a, const BandPoly& b, const char* what) {
  if (a.space != b.space || a.layout != b.layout)
    throw Error(std::string("jet: incompatible operands in ") + what);
}

}  // namespace

BandPoly::BandPoly(const BandSpace& s, LayoutPtr l)
    : space(&s), layout(std::move(l)), data(static_cast<std::size_t>(layout->ncomp) * s.size()) {}

BandPoly BandPoly::constant(const BandSpace& s, LayoutPtr l, const std::vector<cplx>& c) {
  BandPoly p(s, std::move(l));
  p.add_constant(c);
  return p;
}

BandPoly& BandPoly::operator+=(const BandPoly& o) {
  require_same(*this, o, "+=");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
  return *this;
}

BandPoly& BandPoly::operator-=(const BandPoly& o) {
  require_same(*this, o, "-=");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
  return *this;
}

BandPoly& BandPoly::axpy(double s, const BandPoly& o) {
  require_same(*this, o, "axpy");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += s * o.data[i];
  return *this;
}

BandPoly& BandPoly::operator*=(double s) {
  for (cplx& c : data) c *= s;
  return *this;
}

BandPoly& BandPoly::add_constant(const std::vector<cplx>& c, double s) {
  if (c.size() != nb()) throw Error("jet: constant of wrong size");
  if (layout->count[0] == 0) return *this;
  cplx* d = comp(0);
  for (std::size_t i = 0; i < nb(); ++i) d[i] += s * c[i];
  return *this;
}

double BandPoly::max_abs() const {
  double m = 0;
  for (const cplx& c : data) m = std::max(m, std::abs(c));
  return m;
}

BandPoly operator+(BandPoly a, const BandPoly& b) { return a += b; }
BandPoly operator-(BandPoly a, const BandPoly& b) { return a -= b; }
BandPoly operator*(double s, BandPoly a) { return a *= s; }

BandPoly apply_modes(const BandPoly& a, const std::vector<cplx>& mult) {
  const std::size_t nb = a.nb();
  if (mult.size() != nb) throw Error("jet: multiplier of wrong size");
  BandPoly out(*a.space, a.layout);
  for (int c = 0; c < a.layout->ncomp; ++c) {
    const cplx* x = a.comp(c);
    cplx* y = out.comp(c);
    for (std::size_t i = 0; i < nb; ++i) y[i] = mult[i] * x[i];
  }
  return out;
}

BandPoly eps_mul(const BandPoly& a, double eps) {
  const JetLayout& l = *a.layout;
  if (!l.formal) return eps * a;
  BandPoly out(*a.space, a.layout);
  const std::size_t nb = a.nb();
  for (unsigned S = 0; S < l.count.size(); ++S)
    for (int j = 1; j < l.count[S]; ++j)
      std::copy_n(a.comp(l.comp(S, j - 1)), nb, out.comp(l.comp(S, j)));
  return out;
}

BandPoly eps_div(const BandPoly& a, double eps) {
  const JetLayout& l = *a.layout;
  if (!l.formal) return (1.0 / eps) * a;
  BandPoly out(*a.space, a.layout);
  const std::size_t nb = a.nb();
  for (unsigned S = 0; S < l.count.size(); ++S) {
    if (l.count[S] == 0) continue;
    const cplx* c0 = a.comp(l.comp(S, 0));
    for (std::size_t i = 0; i < nb; ++i)
      if (c0[i] != cplx(0.0)) throw Error("jet: eps_div of a series with an order-0 term");
    for (int j = 1; j < l.count[S]; ++j)
      std::copy_n(a.comp(l.comp(S, j)), nb, out.comp(l.comp(S, j - 1)));
  }
  return out;
}

BandPoly extend(const BandPoly& a, LayoutPtr l) {
  const JetLayout& s = *a.layout;
  if (l->dims != s.dims + 1 || l->formal != s.formal || l->P != s.P)
    throw Error("jet: extend to an incompatible layout");
  BandPoly out(*a.space, l);
  const std::size_t nb = a.nb();
  for (unsigned S = 0; S < s.count.size(); ++S)
    for (int j = 0; j < s.count[S]; ++j) std::copy_n(a.comp(s.comp(S, j)), nb, out.comp(l->comp(S, j)));
  return out;
}

BandPoly reduce(const BandPoly& a) {
  const JetLayout& s = *a.layout;
  LayoutPtr r = reduced_layout(s);
  BandPoly out(*a.space, r);
  const std::size_t nb = a.nb();
  for (unsigned S = 0; S < r->count.size(); ++S)
    for (int j = 0; j < r->count[S]; ++j) std::copy_n(a.comp(s.comp(S, j)), nb, out.comp(r->comp(S, j)));
  return out;
}

BandPoly last_direction(const BandPoly& a) {
  const JetLayout& s = *a.layout;
  LayoutPtr r = reduced_layout(s);
  const unsigned bit = 1u << (s.dims - 1);
  BandPoly out(*a.space, r);
  const std::size_t nb = a.nb();
  for (unsigned S = 0; S < r->count.size(); ++S)
    for (int j = 0; j < std::min(r->count[S], s.count[S | bit]); ++j)
      std::copy_n(a.comp(s.comp(S | bit, j)), nb, out.comp(r->comp(S, j)));
  return out;
}

BandPoly with_last_direction(const BandPoly& a, const BandPoly& b) {
  const JetLayout& s = *a.layout;
  if (b.layout != reduced_layout(s)) throw Error("jet: direction of the wrong layout");
  const JetLayout& r = *b.layout;
  const unsigned bit = 1u << (s.dims - 1);
  BandPoly out = a;
  const std::size_t nb = a.nb();
  for (unsigned S = 0; S < r.count.size(); ++S)
    for (int j = 0; j < std::min(r.count[S], s.count[S | bit]); ++j) {
      const cplx* x = b.comp(r.comp(S, j));
      cplx* y = out.comp(s.comp(S | bit, j));
      for (std::size_t i = 0; i < nb; ++i) y[i] += x[i];
    }
  return out;
}

std::vector<cplx> evaluate(const BandPoly& a, double eps, unsigned S) {
  const JetLayout& l = *a.layout;
  std::vector<cplx> v(a.nb(), 0.0);
  double p = 1;
  for (int j = 0; j < l.count[S]; ++j, p *= eps) {
    const cplx* c = a.comp(l.comp(S, j));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += p * c[i];
  }
  return v;
}

std::vector<cplx> coefficient(const BandPoly& a, unsigned S, int j) {
  const JetLayout& l = *a.layout;
  if (j >= l.count[S]) return std::vector<cplx>(a.nb(), 0.0);
  const cplx* c = a.comp(l.comp(S, j));
  return std::vector<cplx>(c, c + a.nb());
}

// ---------------------------------------------------------------------------

namespace {

struct RealPlans {
  fftw_plan c2r = nullptr, r2c = nullptr;
};

const RealPlans& real_plans(const Shape& s) {
  static std::map<Shape, RealPlans> cache;
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  const std::size_t n = shape_size(s);
  const std::size_t h = static_cast<std::size_t>(s[0]) * s[1] * (s[2] / 2 + 1);
  auto* r = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  auto* c = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * h));
  RealPlans p;
  p.c2r = fftw_plan_dft_c2r_3d(s[0], s[1], s[2], c, r, FFTW_ESTIMATE);
  p.r2c = fftw_plan_dft_r2c_3d(s[0], s[1], s[2], r, c, FFTW_ESTIMATE);
  fftw_free(r);
  fftw_free(c);
  if (!p.c2r || !p.r2c) throw Error("band: fft planning failed");
  return cache.emplace(s, p).first->second;
}

struct Scratch {
  double* r;
  fftw_complex* c;
  Scratch(std::size_t n, std::size_t h)
      : r(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        c(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * h))) {}
  ~Scratch() {
    fftw_free(r);
    fftw_free(c);
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
};

}  // namespace

PhysPoly to_phys(const BandPoly& a) {
  const BandSpace& s = *a.space;
  const RealPlans& plans = real_plans(s.phys_shape());
  const std::size_t n = s.phys_size(), h = s.half_size(), nb = s.size();
  PhysPoly out(a.layout, n);
  const auto& idx = s.half_index();
  const auto& cj = s.half_conj();
  const int ncomp = a.layout->ncomp;
#pragma omp parallel
  {
    Scratch w(n, h);
#pragma omp for schedule(static)
    for (int c = 0; c < ncomp; ++c) {
      std::memset(static_cast<void*>(w.c), 0, sizeof(fftw_complex) * h);
      const cplx* x = a.comp(c);
      for (std::size_t m = 0; m < nb; ++m) {
        if (cj[m]) continue;
        w.c[idx[m]][0] = x[m].real();
        w.c[idx[m]][1] = x[m].imag();
      }
      fftw_execute_dft_c2r(plans.c2r, w.c, w.r);
      std::copy_n(w.r, n, out.comp(c));
    }
  }
  return out;
}

BandPoly from_phys(const PhysPoly& p, const BandSpace& s) {
  const RealPlans& plans = real_plans(s.phys_shape());
  const std::size_t n = s.phys_size(), h = s.half_size(), nb = s.size();
  if (p.npts != n) throw Error("band: physical samples of the wrong shape");
  BandPoly out(s, p.layout);
  const auto& idx = s.half_index();
  const auto& cj = s.half_conj();
  const double scale = 1.0 / static_cast<double>(n);
  const int ncomp = p.layout->ncomp;
#pragma omp parallel
  {
    Scratch w(n, h);
#pragma omp for schedule(static)
    for (int c = 0; c < ncomp; ++c) {
      std::copy_n(p.comp(c), n, w.r);
      fftw_execute_dft_r2c(plans.r2c, w.r, w.c);
      cplx* y = out.comp(c);
      for (std::size_t m = 0; m < nb; ++m) {
        const cplx v(w.c[idx[m]][0] * scale, w.c[idx[m]][1] * scale);
        y[m] = cj[m] ? std::conj(v) : v;
      }
    }
  }
  return out;
}

namespace {

constexpr std::size_t kTile = 256;

void require_mul(const PhysPoly& out, const PhysPoly& a, const PhysPoly& b) {
  if (a.layout != out.layout || b.layout != out.layout || a.npts != out.npts || b.npts != out.npts)
    throw Error("jet: product of incompatible operands");
}

}  // namespace

void jet_mul_acc(PhysPoly& out, const PhysPoly& a, const PhysPoly& b) {
  require_mul(out, a, b);
  const auto& pairs = out.layout->pairs;
  const std::size_t n = out.npts;
  const std::ptrdiff_t ntiles = static_cast<std::ptrdiff_t>((n + kTile - 1) / kTile);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < ntiles; ++t) {
    const std::size_t p0 = static_cast<std::size_t>(t) * kTile;
    const std::size_t len = std::min(kTile, n - p0);
    for (const auto& pr : pairs) {
      double* y = out.comp(pr[0]) + p0;
      const double* x = a.comp(pr[1]) + p0;
      const double* z = b.comp(pr[2]) + p0;
#pragma omp simd
      for (std::size_t i = 0; i < len; ++i) y[i] += x[i] * z[i];
    }
  }
}

namespace serial {

void jet_mul_acc(PhysPoly& out, const PhysPoly& a, const PhysPoly& b) {
  require_mul(out, a, b);
  for (const auto& pr : out.layout->pairs) {
    double* y = out.comp(pr[0]);
    const double* x = a.comp(pr[1]);
    const double* z = b.comp(pr[2]);
    for (std::size_t i = 0; i < out.npts; ++i) y[i] += x[i] * z[i];
  }
}

}  // namespace serial
}  // namespace blab
