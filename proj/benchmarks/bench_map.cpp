#include <benchmark/benchmark.h>

#include <cmath>

#include "tangle/contraction.hpp"
#include "tangle/domain.hpp"
#include "tangle/fixed_points.hpp"
#include "tangle/map.hpp"
#include "tangle/survival.hpp"

namespace {

tangle::MapParams params(double a) {
  tangle::MapParams p;
  p.a = a;
  p.b = 0.005;
  p.c = 3.0;
  p.d = 2.0;
  p.gamma = std::sqrt(2.0);
  return p;
}

void BM_Apply(benchmark::State& state) {
  const auto p = params(1.5);
  tangle::PhasePoint q(0.3, 0.01);
  for (auto _ : state) {
    auto im = tangle::apply(p, q);
    if (im) q = *im;
    else q = tangle::PhasePoint(0.3, 0.01);
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_Apply);

void BM_Jacobian(benchmark::State& state) {
  const auto p = params(1.5);
  const tangle::PhasePoint q(0.3, 0.01);
  for (auto _ : state) {
    auto J = tangle::jacobian(p, q);
    benchmark::DoNotOptimize(J);
  }
}
BENCHMARK(BM_Jacobian);

void BM_EscapeGridRow(benchmark::State& state) {
  const auto p = params(0.2);
  for (auto _ : state) {
    auto g = tangle::escape_time_grid(p, 15, int(state.range(0)), 4);
    benchmark::DoNotOptimize(g);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 4);
}
BENCHMARK(BM_EscapeGridRow)->Arg(256)->Arg(1024);

void BM_MostContracted(benchmark::State& state) {
  const auto p = params(2.0);
  const tangle::PhasePoint q(0.6, 0.02);
  const tangle::DirectionField field{p, int(state.range(0)), 1e-13};
  for (auto _ : state) {
    auto e = field.eval(q);
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(BM_MostContracted)->Arg(5)->Arg(20);

void BM_FixedPoints(benchmark::State& state) {
  const auto p = params(2.0);
  for (auto _ : state) {
    auto recs = tangle::find_fixed_points(p, 0, 2);
    benchmark::DoNotOptimize(recs);
  }
}
BENCHMARK(BM_FixedPoints);

void BM_FoldStrip(benchmark::State& state) {
  const auto p = params(2.0);
  for (auto _ : state) {
    auto f = tangle::fold_strip(p, 0.0);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BM_FoldStrip);

}  // namespace

BENCHMARK_MAIN();
