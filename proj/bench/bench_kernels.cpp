#include <benchmark/benchmark.h>

#include "circlerect/kernels.hpp"
#include "circlerect/rng.hpp"

namespace {

using namespace circlerect;

std::vector<kernels::CurvatureProbe> probes(std::size_t n) {
  SplitRng rng(11);
  std::vector<kernels::CurvatureProbe> out(n);
  for (auto& p : out) p = {rng.in_ball(0.8), rng.unit_vector(), rng.unit_vector()};
  return out;
}

std::vector<kernels::GeodesicStart> starts(std::size_t n) {
  SplitRng rng(12);
  std::vector<kernels::GeodesicStart> out(n);
  for (auto& s : out) s = {rng.in_ball(0.7), rng.unit_vector()};
  return out;
}

void BM_CurvatureSerial(benchmark::State& st) {
  const auto pr = probes(static_cast<std::size_t>(st.range(0)));
  const MetricField m = metric_field(MetricKind::CircularHyperbolic);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::reference::curvature_sweep(m, pr));
}

void BM_CurvatureParallel(benchmark::State& st) {
  const auto pr = probes(static_cast<std::size_t>(st.range(0)));
  const MetricField m = metric_field(MetricKind::CircularHyperbolic);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::curvature_sweep(m, pr));
}

void BM_GeodesicSerial(benchmark::State& st) {
  const auto s = starts(static_cast<std::size_t>(st.range(0)));
  const MetricField m = metric_field(MetricKind::CircularElliptic);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::reference::geodesic_sweep(m, s, 2.0, 2000));
}

void BM_GeodesicParallel(benchmark::State& st) {
  const auto s = starts(static_cast<std::size_t>(st.range(0)));
  const MetricField m = metric_field(MetricKind::CircularElliptic);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::geodesic_sweep(m, s, 2.0, 2000));
}

void BM_DegeneracySerial(benchmark::State& st) {
  SplitRng rng(13);
  std::vector<Vec3> pts(static_cast<std::size_t>(st.range(0)));
  for (auto& p : pts) p = rng.in_ball(2.0);
  const SphereNet net = canonical_net(GeometryClass::Hyperbolic);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::reference::degeneracy_sweep(net, pts));
}

void BM_DegeneracyParallel(benchmark::State& st) {
  SplitRng rng(13);
  std::vector<Vec3> pts(static_cast<std::size_t>(st.range(0)));
  for (auto& p : pts) p = rng.in_ball(2.0);
  const SphereNet net = canonical_net(GeometryClass::Hyperbolic);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::degeneracy_sweep(net, pts));
}

}  // namespace

BENCHMARK(BM_CurvatureSerial)->Arg(150);
BENCHMARK(BM_CurvatureParallel)->Arg(150);
BENCHMARK(BM_GeodesicSerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GeodesicParallel)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DegeneracySerial)->Arg(100000);
BENCHMARK(BM_DegeneracyParallel)->Arg(100000);

BENCHMARK_MAIN();
