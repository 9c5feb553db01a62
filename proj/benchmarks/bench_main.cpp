#include <benchmark/benchmark.h>

#include "hypercon/eigensolver.hpp"
#include "hypercon/potentials.hpp"
#include "hypercon/semigroup.hpp"

using namespace hypercon;

namespace {

TridiagonalOperator oscillator(int n) {
  const Grid g = Grid::uniform(-10.0, 10.0, n);
  const WeightedGridMeasure m = build_measure(g, constant_density(), false);
  std::vector<double> V(g.n);
  for (int i = 0; i < g.n; ++i) V[i] = g.nodes[i] * g.nodes[i];
  return schrodinger_operator(m, V);
}

void BM_GroundState(benchmark::State& state) {
  const TridiagonalOperator H = oscillator(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ground_state(H).lambda0);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GroundState)->RangeMultiplier(2)->Range(512, 8192)->Complexity();

void BM_Propagate(benchmark::State& state) {
  const TridiagonalOperator H = oscillator(2001);
  std::vector<double> f0(H.size());
  for (int i = 0; i < H.size(); ++i)
    f0[i] = std::exp(-0.25 * H.measure.grid.nodes[i] * H.measure.grid.nodes[i]);
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(H, f0, 0.1, 1e-3, {}, 1).states.back()[0]);
  }
}
BENCHMARK(BM_Propagate);

void BM_GapConstants(benchmark::State& state) {
  const LsiParams p{0.5, 1.0, 2.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(aida_gap_constants(p, 1.5).e1);
  }
}
BENCHMARK(BM_GapConstants);

}  // namespace

BENCHMARK_MAIN();
