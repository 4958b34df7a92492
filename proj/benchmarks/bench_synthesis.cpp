#include <benchmark/benchmark.h>

#include "chaoscope/fields.hpp"
#include "chaoscope/gmc.hpp"
#include "chaoscope/kernels.hpp"
#include "chaoscope/rng.hpp"
#include "chaoscope/spectral.hpp"
#include "chaoscope/atomic.hpp"

namespace {

using namespace chaoscope;

void BM_PhiloxNormals(benchmark::State& state) {
  RngStream rng(1);
  double sink = 0.0;
  for (auto _ : state) {
    for (int i = 0; i < 1024; ++i) sink += rng.normal();
  }
  benchmark::DoNotOptimize(sink);
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_PhiloxNormals);

void BM_SpectralEval(benchmark::State& state) {
  const auto k = kernels::ball_seed_kernel(2);
  const auto m = kernels::standard_mollifier(2, 1);
  double sink = 0.0, s = 1e-5;
  for (auto _ : state) {
    sink += spectral::k_hat_W(k, m, 0.5, s);
    s = s < 100.0 ? s * 1.01 : 1e-5;
  }
  benchmark::DoNotOptimize(sink);
}
BENCHMARK(BM_SpectralEval);

void BM_Synthesis1D(benchmark::State& state) {
  const auto k = kernels::ball_seed_kernel(1);
  const auto density = spectral::spectrum_Kt(k, 1.0);
  GridSpec spec;
  spec.dimension = 1;
  spec.points_per_side = static_cast<int>(state.range(0));
  spec.side_length = 64.0;
  RngStream rng(7);
  uint64_t r = 0;
  for (auto _ : state) {
    auto field = fields::sample_stationary(spec, density, rng.split(r++));
    benchmark::DoNotOptimize(field.values.data());
  }
  state.SetItemsProcessed(state.iterations() * spec.num_points());
}
BENCHMARK(BM_Synthesis1D)->Arg(1024)->Arg(4096);

void BM_Synthesis2D(benchmark::State& state) {
  const auto k = kernels::ball_seed_kernel(2);
  const auto density = spectral::spectrum_Kt(k, 4.0);
  GridSpec spec;
  spec.dimension = 2;
  spec.points_per_side = static_cast<int>(state.range(0));
  spec.side_length = 1.0;
  RngStream rng(7);
  uint64_t r = 0;
  for (auto _ : state) {
    auto field = fields::sample_stationary(spec, density, rng.split(r++));
    benchmark::DoNotOptimize(field.values.data());
  }
  state.SetItemsProcessed(state.iterations() * spec.num_points());
}
BENCHMARK(BM_Synthesis2D)->Arg(128)->Arg(512);

void BM_ChaosMeasure(benchmark::State& state) {
  const auto k = kernels::ball_seed_kernel(2);
  GridSpec spec;
  spec.dimension = 2;
  spec.points_per_side = 256;
  spec.side_length = 1.0;
  auto field = fields::sample_martingale_path(k, spec, {4.0}, RngStream(5))[0];
  for (auto _ : state) {
    auto mu = gmc::chaos_measure(field, 3.0, 4.0, 1.0);
    benchmark::DoNotOptimize(mu.weights.data());
  }
  state.SetItemsProcessed(state.iterations() * spec.num_points());
}
BENCHMARK(BM_ChaosMeasure);

void BM_AtomicSample(benchmark::State& state) {
  const auto nu = atomic::lebesgue_box(2);
  RngStream rng(9);
  uint64_t r = 0;
  for (auto _ : state) {
    auto atoms = atomic::sample_atomic(nu, 3.0, 1e-3, true, rng.split(r++));
    benchmark::DoNotOptimize(atoms.masses.data());
  }
}
BENCHMARK(BM_AtomicSample);

}  // namespace

BENCHMARK_MAIN();
