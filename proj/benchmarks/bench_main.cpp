#include <benchmark/benchmark.h>

#include <random>

#include "lpbundle/lpbc.hpp"
#include "lpbundle/lpbnc.hpp"

using namespace lpbundle;

namespace {

std::vector<PlaneRow> random_rows(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<PlaneRow> rows(m);
  for (auto& r : rows) {
    r.gradient.resize(n);
    for (auto& g : r.gradient) g = u(rng);
    r.offset = u(rng);
  }
  return rows;
}

void SubproblemSolve(benchmark::State& state) {
  const std::size_t n = state.range(0), m = state.range(1);
  const auto rows = random_rows(n, m, 42);
  const BoxRegion box{Vec(n, 0.0), 1.0};
  for (auto _ : state) {
    auto sol = solve_subproblem(rows, box);
    benchmark::DoNotOptimize(sol);
  }
  state.SetComplexityN(static_cast<long>(n * m));
}
BENCHMARK(SubproblemSolve)->Args({10, 20})->Args({50, 100})->Args({100, 200})->Args({50, 400});

void LpbcMaxq(benchmark::State& state) {
  const Problem& p = lookup("Maxq");
  LpbcOptions opt;
  for (auto _ : state) {
    auto res = run_lpbc(p, opt);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(LpbcMaxq)->Unit(benchmark::kMillisecond);

void LpbncCrescent(benchmark::State& state) {
  const Problem& p = lookup("Crescent");
  LpbncOptions opt;
  for (auto _ : state) {
    auto res = run_lpbnc(p, opt);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(LpbncCrescent)->Unit(benchmark::kMillisecond);

void OracleChainedMifflin(benchmark::State& state) {
  const Problem& p = lookup("Chained Mifflin2");
  Vec x = p.x0;
  for (auto _ : state) {
    auto r = p.eval(x);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(OracleChainedMifflin);

}  // namespace

BENCHMARK_MAIN();
