#include <benchmark/benchmark.h>

#include "lift/catalog.hpp"
#include "lift/jets.hpp"
#include "lift/lifted_connections.hpp"
#include "lift/verify.hpp"

namespace {

void BM_JetMultiply(benchmark::State& state) {
  const int vars = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  lift::Jet a = lift::Jet::constant(1.0, vars, order);
  lift::Jet b = lift::Jet::constant(2.0, vars, order);
  for (int i = 0; i < vars; ++i) {
    a += lift::Jet::variable(i, 0.1 * i, vars, order);
    b *= lift::Jet::variable(i, 0.3 + i, vars, order);
  }
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetMultiply)->Args({2, 3})->Args({4, 2})->Args({4, 3})->Args({6, 3});

void BM_ConnectionAt(benchmark::State& state) {
  const auto m = *lift::find_catalog_manifold("sphere2");
  const auto pt = lift::sample_point(m, 42, 0);
  const auto which = static_cast<lift::LiftedConnection>(state.range(0));
  for (auto _ : state) {
    const auto g = lift::phase_geometry(m, pt, 2);
    benchmark::DoNotOptimize(lift::lifted_connection_jets(g, which));
  }
}
BENCHMARK(BM_ConnectionAt)
    ->Arg(static_cast<int>(lift::LiftedConnection::Complete))
    ->Arg(static_cast<int>(lift::LiftedConnection::Bnw))
    ->Arg(static_cast<int>(lift::LiftedConnection::Symplectified));

void BM_PhaseCurvature(benchmark::State& state) {
  const auto m = *lift::find_catalog_manifold("halfplane2");
  const auto pt = lift::sample_point(m, 42, 0);
  for (auto _ : state) benchmark::DoNotOptimize(lift::phase_curvature_at(m, pt, lift::LiftedConnection::Bnw));
}
BENCHMARK(BM_PhaseCurvature);

void BM_TheoremSample(benchmark::State& state) {
  const auto m = *lift::find_catalog_manifold("sphere2");
  lift::SampleConfig cfg;
  cfg.samples = 1;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(lift::check_theorem(m, cfg));
}
BENCHMARK(BM_TheoremSample);

}  // namespace

BENCHMARK_MAIN();
