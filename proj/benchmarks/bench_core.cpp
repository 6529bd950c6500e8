#include <benchmark/benchmark.h>

#include "lopt/analytic.hpp"
#include "lopt/calibrate.hpp"
#include "lopt/manybody.hpp"
#include "lopt/spectral.hpp"

using namespace lopt;

namespace {

ChainSpec impurity_chain(int L, double beta) {
  const PotentialProfile p[] = {CenterImpurity{beta}};
  return build_chain(L, Uniform{}, p);
}

void BM_Diagonalize(benchmark::State& state) {
  const auto spec = impurity_chain(static_cast<int>(state.range(0)), 0.95);
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize(spec));
}
BENCHMARK(BM_Diagonalize)->Arg(21)->Arg(51)->Arg(201)->Arg(501);

void BM_RTCoefficients(benchmark::State& state) {
  const auto d = diagonalize(impurity_chain(static_cast<int>(state.range(0)), 0.95));
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rt_coefficients(d, t));
    t += 0.1;
  }
}
BENCHMARK(BM_RTCoefficients)->Arg(51)->Arg(501);

void BM_FindTStar(benchmark::State& state) {
  const auto spec = impurity_chain(static_cast<int>(state.range(0)), 0.95);
  for (auto _ : state) benchmark::DoNotOptimize(find_tstar(spec));
}
BENCHMARK(BM_FindTStar)->Arg(51)->Unit(benchmark::kMillisecond);

void BM_FindBeta5050(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(find_beta5050(static_cast<int>(state.range(0)), Uniform{}));
}
BENCHMARK(BM_FindBeta5050)->Arg(51)->Unit(benchmark::kMillisecond);

void BM_CmQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(analytic::cm_quadrature(static_cast<int>(state.range(0)), 1.3));
}
BENCHMARK(BM_CmQuadrature)->Arg(2)->Arg(8);

void BM_TwoBodyEvolve(benchmark::State& state) {
  const auto spec = impurity_chain(static_cast<int>(state.range(0)), 0.95);
  const auto gen = build_generator(spec, Statistics::boson(0.5));
  const auto psi = hom_initial_state(gen, spec);
  const auto method = state.range(1) ? EvolutionMethod::Krylov : EvolutionMethod::Dense;
  for (auto _ : state) benchmark::DoNotOptimize(evolve_two_body(gen, psi, 50.0, method));
}
BENCHMARK(BM_TwoBodyEvolve)->Args({21, 0})->Args({21, 1})->Args({51, 1})->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
