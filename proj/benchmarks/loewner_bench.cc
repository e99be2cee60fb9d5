#include <benchmark/benchmark.h>

#include "loewner/canonical_maps.h"
#include "loewner/decompose.h"
#include "loewner/harness.h"
#include "loewner/projections.h"
#include "loewner/random.h"

namespace loewner {
namespace {

void BM_PhiTApply(benchmark::State& state) {
  Rng rng(1);
  const Algebra alg({static_cast<int>(state.range(0))});
  const Element T = GenPosInvertible(alg, 20.0, rng, 3.0);
  const Element a = GenEffect(alg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(PhiTApply(T, a));
}
BENCHMARK(BM_PhiTApply)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_TwoProjectionPosition(benchmark::State& state) {
  Rng rng(2);
  const Algebra alg({static_cast<int>(state.range(0))});
  const Element p = GenProjection(alg, rng);
  const Element q = GenProjection(alg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(TwoProjectionPositionOf(p, q));
}
BENCHMARK(BM_TwoProjectionPosition)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_DecomposeEffectIso(benchmark::State& state) {
  Rng rng(3);
  const Algebra alg({static_cast<int>(state.range(0)), 2});
  const BlackBoxMap phi = BlackBoxFromExpr(
      GenOrderIsoExpr(alg, IntervalKind::kEffect, rng), alg);
  for (auto _ : state) benchmark::DoNotOptimize(DecomposeEffectIso(phi));
}
BENCHMARK(BM_DecomposeEffectIso)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DecomposeCommutative(benchmark::State& state) {
  Rng rng(4);
  const int n = static_cast<int>(state.range(0));
  const ProductMap gen = GenProductMap(n, IntervalKind::kEffect, CommOptions{}, rng);
  const Algebra alg(std::vector<int>(n, 1));
  const BlackBoxMap phi{alg, alg, IntervalKind::kEffect, IntervalKind::kEffect,
                        gen, {}};
  for (auto _ : state) benchmark::DoNotOptimize(DecomposeCommutative(phi));
}
BENCHMARK(BM_DecomposeCommutative)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace loewner

BENCHMARK_MAIN();
