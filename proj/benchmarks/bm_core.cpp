#include <benchmark/benchmark.h>

#include <numbers>

#include "kamreduce/diophantine.hpp"
#include "kamreduce/homology.hpp"
#include "kamreduce/kam_driver.hpp"
#include "kamreduce/smoothing.hpp"
#include "kamreduce/theta_grid.hpp"
#include "kamreduce/verifier.hpp"
#include "scenarios.hpp"
#include "support.hpp"

using namespace kamtest;

namespace {

std::vector<double> torus_omega(int n) {
  const std::vector<double> all{std::numbers::phi, std::numbers::sqrt2, std::numbers::sqrt3, 2.2360679};
  return {all.begin(), all.begin() + n};
}

// args: n, radius
void BM_Multiply(benchmark::State& st) {
  Rand r(1);
  const int n = static_cast<int>(st.range(0)), K = static_cast<int>(st.range(1));
  const auto a = random_series(r, n, CoeffKind::kMatrix, 4, 4, K, 400);
  const auto b = random_series(r, n, CoeffKind::kMatrix, 4, 4, K, 400);
  for (auto _ : st) benchmark::DoNotOptimize(kam::multiply(a, b, 64));
  st.counters["pairs"] = static_cast<double>(a.size() * b.size());
}
BENCHMARK(BM_Multiply)->Args({1, 16})->Args({2, 8})->Args({2, 16})->Unit(benchmark::kMillisecond);

void BM_GridRoundTrip(benchmark::State& st) {
  Rand r(2);
  const int n = static_cast<int>(st.range(0)), G = static_cast<int>(st.range(1));
  const auto f = random_series(r, n, CoeffKind::kMatrix, 4, 4, G / 4, 200);
  const kam::ThetaGrid grid(n, G);
  for (auto _ : st) {
    benchmark::DoNotOptimize(grid.analyze(grid.synthesize(f), CoeffKind::kMatrix, G));
  }
}
BENCHMARK(BM_GridRoundTrip)->Args({1, 256})->Args({2, 64})->Unit(benchmark::kMicrosecond);

// args: n, d
void BM_SolveHomological(benchmark::State& st) {
  Rand r(3);
  const int n = static_cast<int>(st.range(0)), d = static_cast<int>(st.range(1));
  std::vector<double> v(d);
  for (int j = 0; j < d; ++j) v[j] = 1.0 + 0.37 * j;
  const auto h = kam::NormalForm::diagonal(v);
  const auto q = random_re_symbol(r, n, d, 6, 20, 0.3);
  const auto om = torus_omega(n);
  for (auto _ : st) benchmark::DoNotOptimize(kam::solve_homological(h, q, om, 6, 0.0, 1.0, 1e-3));
}
BENCHMARK(BM_SolveHomological)->Args({1, 1})->Args({1, 3})->Args({2, 2})->Unit(benchmark::kMicrosecond);

void BM_TimeOneMap(benchmark::State& st) {
  Rand r(4);
  const int n = static_cast<int>(st.range(0)), d = static_cast<int>(st.range(1));
  const auto f = random_re_symbol(r, n, d, 3, 4, 0.5);
  for (auto _ : st) benchmark::DoNotOptimize(kam::time_one_map(f, 0.05));
}
BENCHMARK(BM_TimeOneMap)->Args({1, 2})->Args({2, 2})->Unit(benchmark::kMillisecond);

void BM_CheckAdmissible(benchmark::State& st) {
  const int K = static_cast<int>(st.range(0));
  const std::vector<double> eigs{1.0, std::numbers::sqrt2, 1.7};
  const auto om = torus_omega(2);
  for (auto _ : st) benchmark::DoNotOptimize(kam::check_admissible(om, eigs, K, 1e-3, 1.5));
}
BENCHMARK(BM_CheckAdmissible)->Arg(8)->Arg(32);

void BM_SmoothApprox(benchmark::State& st) {
  Rand r(5);
  const auto q = random_re_symbol(r, 2, 2, 12, 60, 0.2);
  for (auto _ : st) benchmark::DoNotOptimize(kam::smooth_approx(q, 0.3));
}
BENCHMARK(BM_SmoothApprox)->Unit(benchmark::kMicrosecond);

void BM_RunDesk(benchmark::State& st) {
  const auto c = desk_config();
  for (auto _ : st) benchmark::DoNotOptimize(kam::run(c));
}
BENCHMARK(BM_RunDesk)->Unit(benchmark::kMillisecond);

void BM_ConjugacyDesk(benchmark::State& st) {
  const auto c = desk_config();
  const auto rep = kam::run(c);
  const CVec z0 = CVec::Ones(1);
  for (auto _ : st) benchmark::DoNotOptimize(kam::conjugacy_defect(rep, c.problem, z0, 100.0, 0.01));
}
BENCHMARK(BM_ConjugacyDesk)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
