// OpenMP kernels against the serial reference. Thread count from
// OMP_NUM_THREADS; on one core the two should be about equal.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "blab/band.hpp"
#include "blab/initial_data.hpp"
#include "blab/kernels.hpp"
#include "blab/pe_solver.hpp"

using namespace blab;

namespace {

std::vector<double> wave(std::size_t n, double a) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(a * static_cast<double>(i));
  return x;
}

template <bool Par>
void BM_mul_acc(benchmark::State& st) {
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  const auto a = wave(n, 0.3), b = wave(n, 0.7);
  auto y = wave(n, 1.1);
  for (auto _ : st) {
    if constexpr (Par)
      kernels::mul_acc(a.data(), b.data(), y.data(), n);
    else
      kernels::serial::mul_acc(a.data(), b.data(), y.data(), n);
    benchmark::DoNotOptimize(y.data());
  }
  st.SetBytesProcessed(static_cast<int64_t>(st.iterations() * n * 3 * sizeof(double)));
}

template <bool Par>
void BM_jet_mul_acc(benchmark::State& st) {
  // the shape used for a formal level-4 run with one tangent direction
  const LayoutPtr l = jet_layout(1, 0b1, 5, true);
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  PhysPoly a(l, n), b(l, n), y(l, n);
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    a.data[i] = std::sin(0.1 * i);
    b.data[i] = std::cos(0.3 * i);
  }
  for (auto _ : st) {
    if constexpr (Par)
      jet_mul_acc(y, a, b);
    else
      serial::jet_mul_acc(y, a, b);
    benchmark::DoNotOptimize(y.data.data());
  }
}

void BM_rhs_primitive(benchmark::State& st) {
  const Grid g = Grid::cube(static_cast<int>(st.range(0)));
  const Schedule sch = make_schedule(1e-2, 0.5, 0.05);
  const PrimitiveState W = random_state(g, 1, 0.3);
  const ForcingSet f = zero_forcing(g);
  for (auto _ : st) benchmark::DoNotOptimize(rhs_primitive(W, sch, f));
}

}  // namespace

BENCHMARK(BM_mul_acc<true>)->Name("mul_acc/omp")->Arg(1 << 15)->Arg(1 << 20);
BENCHMARK(BM_mul_acc<false>)->Name("mul_acc/serial")->Arg(1 << 15)->Arg(1 << 20);
BENCHMARK(BM_jet_mul_acc<true>)->Name("jet_mul_acc/omp")->Arg(27000);
BENCHMARK(BM_jet_mul_acc<false>)->Name("jet_mul_acc/serial")->Arg(27000);
BENCHMARK(BM_rhs_primitive)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
