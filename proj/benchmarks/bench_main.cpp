#include <benchmark/benchmark.h>

#include <map>

#include "gamow/diagnostics.hpp"
#include "gamow/eigensolver.hpp"
#include "gamow/energy.hpp"
#include "gamow/flow.hpp"
#include "gamow/potential.hpp"
#include "gamow/shapes.hpp"
#include "gamow/stability.hpp"

namespace {

using namespace gamow;

const Boundary& sphere(int level) {
  static std::map<int, Boundary> cache;
  auto it = cache.find(level);
  if (it == cache.end()) it = cache.emplace(level, tessellate({3, Ball{}, level})).first;
  return it->second;
}

QuadratureOptions single() {
  QuadratureOptions q;
  q.threads = 1;
  return q;
}

void BM_Tessellate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tessellate({3, Ball{}, static_cast<int>(state.range(0))}));
}
BENCHMARK(BM_Tessellate)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PotentialOnVertices(benchmark::State& state) {
  const auto& b = sphere(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(potential_on_vertices(b, single()));
  state.counters["vertices"] = static_cast<double>(b.vertex_count());
}
BENCHMARK(BM_PotentialOnVertices)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_NonlocalEnergy(benchmark::State& state) {
  const auto& b = sphere(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nonlocal_energy(b, single()));
}
BENCHMARK(BM_NonlocalEnergy)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_KernelMatrix(benchmark::State& state) {
  const auto& b = sphere(static_cast<int>(state.range(0)));
  KernelMatrixOptions o;
  o.quadrature = single();
  for (auto _ : state) benchmark::DoNotOptimize(kernel_matrix(b, o));
}
BENCHMARK(BM_KernelMatrix)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_SymmetricLowest(benchmark::State& state) {
  const auto m = state.range(0);
  MatrixX a = MatrixX::Random(m, m);
  a = (a + a.transpose()).eval();
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_lowest(a, 16));
}
BENCHMARK(BM_SymmetricLowest)->Arg(162)->Arg(642)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  StabilityOptions so;
  so.kernel.quadrature = single();
  const auto sv = assemble(sphere(3), 1.0, so);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(sv, 16));
}
BENCHMARK(BM_Spectrum)->Unit(benchmark::kMillisecond);

void BM_FlowStep(benchmark::State& state) {
  PerturbedBall pb;
  pb.amplitudes[{2, 0}] = 0.15;
  const Boundary b = tessellate({3, pb, 3});
  FlowOptions fo;
  fo.quadrature = single();
  for (auto _ : state) benchmark::DoNotOptimize(step(b, 0.1, fo));
}
BENCHMARK(BM_FlowStep)->Unit(benchmark::kMillisecond);

void BM_ShapeCensus(benchmark::State& state) {
  const auto& b = sphere(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(shape_census(b));
}
BENCHMARK(BM_ShapeCensus)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Remesh(benchmark::State& state) {
  const auto& b = sphere(3);
  for (auto _ : state) benchmark::DoNotOptimize(remesh(b));
}
BENCHMARK(BM_Remesh)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
