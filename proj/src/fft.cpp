#include "blab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>

#include "blab/kernels.hpp"

namespace blab {

std::mutex& fftw_planner_mutex();

namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex& plan_mutex = fftw_planner_mutex();

// Plans are created once per shape and never destroyed; fftw_execute_dft on
// distinct buffers is thread-safe, planning is not.
const PlanPair& plans_for(const Shape& s) {
  static std::map<Shape, PlanPair> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  const std::size_t n = shape_size(s);
  auto* tmp = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  PlanPair p;
  p.fwd = fftw_plan_dft_3d(s[0], s[1], s[2], tmp, tmp, FFTW_FORWARD, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft_3d(s[0], s[1], s[2], tmp, tmp, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(tmp);
  if (!p.fwd || !p.bwd) throw Error("fft: planning failed");
  return cache.emplace(s, p).first->second;
}

int storage_index(int k, int m) { return k >= 0 ? k : k + m; }

}  // namespace

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

FftBuffer::FftBuffer(const Shape& s) : shape_(s), n_(shape_size(s)) {
  data_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n_));
  if (!data_) throw Error("fft: allocation failed");
  zero();
}

FftBuffer::~FftBuffer() { fftw_free(data_); }

void FftBuffer::zero() { std::memset(static_cast<void*>(data_), 0, sizeof(cplx) * n_); }

void FftBuffer::backward() {
  auto* d = reinterpret_cast<fftw_complex*>(data_);
  fftw_execute_dft(plans_for(shape_).bwd, d, d);
}

void FftBuffer::forward() {
  auto* d = reinterpret_cast<fftw_complex*>(data_);
  fftw_execute_dft(plans_for(shape_).fwd, d, d);
}

int smooth_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

std::vector<double> to_physical(const SpectralField& f) { return to_physical(f, f.grid().N); }

std::vector<double> to_physical(const SpectralField& f, const Shape& M) {
  const Grid& g = f.grid();
  FftBuffer buf(M);
  kernels::serial::for_each_mode(g, [&](std::size_t idx, const IVec3& k) {
    const cplx c = f.coeffs()[idx];
    if (c == cplx(0.0)) return;
    for (int a = 0; a < 3; ++a)
      if (2 * std::abs(k[a]) >= M[a]) throw Error("to_physical: mode does not fit target grid");
    const std::size_t j = (static_cast<std::size_t>(storage_index(k[0], M[0])) * M[1] +
                           storage_index(k[1], M[1])) * M[2] + storage_index(k[2], M[2]);
    buf.data()[j] = c;
  });
  buf.backward();
  std::vector<double> out(buf.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf.data()[i].real();
  return out;
}

SpectralField from_physical(const std::vector<double>& values, const Grid& g, Parity p) {
  const Shape& M = g.N;
  if (values.size() != shape_size(M)) throw Error("from_physical: size mismatch");
  FftBuffer buf(M);
  for (std::size_t i = 0; i < values.size(); ++i) buf.data()[i] = values[i];
  buf.forward();
  SpectralField f(g, p);
  const double scale = 1.0 / static_cast<double>(buf.size());
  kernels::for_each_mode(g, [&](std::size_t idx, const IVec3& k) {
    if (g.representable(k)) f.coeffs()[idx] = buf.data()[idx] * scale;
  });
  return f;
}

SpectralField from_physical(const std::vector<double>& values, const Shape& M, const Grid& g,
                            Parity p) {
  if (values.size() != shape_size(M)) throw Error("from_physical: size mismatch");
  FftBuffer buf(M);
  for (std::size_t i = 0; i < values.size(); ++i) buf.data()[i] = values[i];
  buf.forward();
  SpectralField f(g, p);
  const double scale = 1.0 / static_cast<double>(buf.size());
  kernels::for_each_mode(g, [&](std::size_t idx, const IVec3& k) {
    if (!g.dealiased(k)) return;
    for (int a = 0; a < 3; ++a)
      if (2 * std::abs(k[a]) >= M[a]) return;
    const std::size_t j = (static_cast<std::size_t>(storage_index(k[0], M[0])) * M[1] +
                           storage_index(k[1], M[1])) * M[2] + storage_index(k[2], M[2]);
    f.coeffs()[idx] = buf.data()[j] * scale;
  });
  return f;
}

Shape product_shape(const Grid& g) {
  Shape m;
  for (int a = 0; a < 3; ++a) m[a] = smooth_size(3 * g.dealias_max(a) + 1);
  return m;
}

SpectralField multiply(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid(), b.grid(), "multiply");
  const Shape M = product_shape(a.grid());
  std::vector<double> pa = to_physical(a, M);
  const std::vector<double> pb = to_physical(b, M);
  for (std::size_t i = 0; i < pa.size(); ++i) pa[i] *= pb[i];
  return from_physical(pa, M, a.grid(), product_parity(a.parity(), b.parity()));
}

namespace reference {

std::vector<double> to_physical(const SpectralField& f) {
  const Grid& g = f.grid();
  std::vector<double> out(g.size(), 0.0);
  const double two_pi = 2 * std::numbers::pi;
  for (int j0 = 0; j0 < g.N[0]; ++j0)
    for (int j1 = 0; j1 < g.N[1]; ++j1)
      for (int j2 = 0; j2 < g.N[2]; ++j2) {
        cplx s = 0;
        for (std::size_t idx = 0; idx < g.size(); ++idx) {
          const cplx c = f.coeffs()[idx];
          if (c == cplx(0.0)) continue;
          const IVec3 k = g.k_of(idx);
          const double ph = two_pi * (static_cast<double>(k[0]) * j0 / g.N[0] +
                                      static_cast<double>(k[1]) * j1 / g.N[1] +
                                      static_cast<double>(k[2]) * j2 / g.N[2]);
          s += c * cplx(std::cos(ph), std::sin(ph));
        }
        out[g.flat(j0, j1, j2)] = s.real();
      }
  return out;
}

SpectralField from_physical(const std::vector<double>& values, const Grid& g, Parity p) {
  SpectralField f(g, p);
  const double two_pi = 2 * std::numbers::pi;
  const double scale = 1.0 / static_cast<double>(g.size());
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const IVec3 k = g.k_of(idx);
    if (!g.representable(k)) continue;
    cplx s = 0;
    for (int j0 = 0; j0 < g.N[0]; ++j0)
      for (int j1 = 0; j1 < g.N[1]; ++j1)
        for (int j2 = 0; j2 < g.N[2]; ++j2) {
          const double ph = two_pi * (static_cast<double>(k[0]) * j0 / g.N[0] +
                                      static_cast<double>(k[1]) * j1 / g.N[1] +
                                      static_cast<double>(k[2]) * j2 / g.N[2]);
          s += values[g.flat(j0, j1, j2)] * cplx(std::cos(ph), -std::sin(ph));
        }
    f.coeffs()[idx] = s * scale;
  }
  return f;
}

}  // namespace reference
}  // namespace blab
