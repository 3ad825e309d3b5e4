// Serial vs OpenMP kernels on grids of the sizes used by the experiments.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "solmanifold/kernels.hpp"
#include "solmanifold/mixed_norms.hpp"
#include "solmanifold/modulation.hpp"
#include "solmanifold/soliton.hpp"

using namespace solmanifold;

namespace {

std::vector<double> wave(std::size_t n, double phase) {
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = std::sin(0.01 * static_cast<double>(j) + phase);
  v.front() = v.back() = 0.0;
  return v;
}

Exec exec_of(const benchmark::State& s) { return s.range(1) ? Exec::parallel : Exec::serial; }

void BM_NonlinearAcceleration(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double dr = 40.0 / static_cast<double>(n - 1);
  std::vector<double> v = wave(n, 0.1), W(n), inv_r4(n, 0.0), out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = dr * static_cast<double>(j);
    W[j] = r * phi(r, 1.0);
    if (j) inv_r4[j] = 1.0 / std::pow(r, 4);
  }
  for (auto _ : state) {
    kernels::nonlinear_acceleration(v.data(), W.data(), inv_r4.data(), nullptr, out.data(), n, 1.0 / (dr * dr),
                                    exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

void BM_Leapfrog(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a = wave(n, 0.0), b = wave(n, 0.1), acc = wave(n, 0.2), out(n);
  for (auto _ : state) {
    kernels::leapfrog_update(a.data(), b.data(), acc.data(), out.data(), n, 1e-4, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

void BM_DalembertSine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double dr = 40.0 / static_cast<double>(n - 1);
  std::vector<double> w = wave(n, 0.0), Wc(n, 0.0), out(n);
  for (std::size_t j = 1; j < n; ++j) Wc[j] = Wc[j - 1] + 0.5 * dr * (w[j - 1] + w[j]);
  for (auto _ : state) {
    kernels::dalembert_sine(Wc.data(), w.data(), n, dr, 7.3, out.data(), n, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

void BM_TimeNorms(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> u = wave(n, 0.3), sup(n, 0.0), l1(n, 0.0), l2(n, 0.0);
  for (auto _ : state) {
    kernels::accumulate_time_norms(u.data(), n, 0.01, sup.data(), l1.data(), l2.data(), exec_of(state));
    benchmark::DoNotOptimize(l2.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long n : {1601L, 8001L, 32001L})
    for (long par : {0L, 1L}) b->Args({n, par});
  b->ArgNames({"n", "parallel"});
}

}  // namespace

BENCHMARK(BM_NonlinearAcceleration)->Apply(sizes);
BENCHMARK(BM_Leapfrog)->Apply(sizes);
BENCHMARK(BM_DalembertSine)->Apply(sizes);
BENCHMARK(BM_TimeNorms)->Apply(sizes);

BENCHMARK_MAIN();
