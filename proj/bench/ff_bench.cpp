#include <benchmark/benchmark.h>

#include <random>

#include "ff/holonomy.hpp"
#include "ff/kernels.hpp"
#include "ff/normal_form.hpp"

using namespace ff;

namespace {

std::vector<kernels::Term2<Rational>> dense_terms(int degree, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<long> n(-50, 50), d(1, 7);
  std::vector<kernels::Term2<Rational>> out;
  for (int t = 0; t <= degree; ++t)
    for (int i = 0; i <= t; ++i) out.push_back({i, t - i, Rational(n(rng), d(rng))});
  return out;
}

template <bool Parallel>
void BM_Multiply(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto a = dense_terms(N, 1), b = dense_terms(N, 2);
  auto keep = [N](int i, int j) { return i + j <= N; };
  for (auto _ : state) {
    auto r = Parallel ? kernels::multiply_parallel(a, b, keep) : kernels::multiply_serial(a, b, keep);
    benchmark::DoNotOptimize(r);
  }
  state.SetComplexityN(N);
}

void BM_BoundSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bound_bruteforce_serial(6, static_cast<int>(state.range(0))));
}

void BM_BoundParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bound_bruteforce(6, static_cast<int>(state.range(0))));
}

OneForm2<Complex> pd_model(int m) {
  VarNames v{"x", "y"};
  auto A = -(Series2<Complex>::monomial(v, 0, 1, Complex(m)) + Series2<Complex>::monomial(v, m, 0, Complex(1)));
  return {A, Series2<Complex>::variable(v, 0)};
}

std::vector<cld> samples(int n) {
  std::vector<cld> out;
  for (int k = 0; k < n; ++k) out.emplace_back(0.01L + 0.04L * k / n, 0.01L * k / n);
  return out;
}

template <bool Parallel>
void BM_Holonomy(benchmark::State& state) {
  auto w = pd_model(3);
  auto xs = samples(static_cast<int>(state.range(0)));
  HolonomyLoop loop;
  for (auto _ : state) {
    auto r = Parallel ? numeric_holonomy(w, loop, xs) : numeric_holonomy_serial(w, loop, xs);
    benchmark::DoNotOptimize(r);
  }
}

}  // namespace

BENCHMARK(BM_Multiply<false>)->Name("multiply/serial")->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Multiply<true>)->Name("multiply/parallel")->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundSerial)->Name("bound/serial")->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundParallel)->Name("bound/parallel")->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Holonomy<false>)->Name("holonomy/serial")->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Holonomy<true>)->Name("holonomy/parallel")->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
