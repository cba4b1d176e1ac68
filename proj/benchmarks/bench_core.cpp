// Micro benchmarks for the hot paths: power iteration, potential evaluation,
// dual optimization, exact counting, and the two samplers.

#include <benchmark/benchmark.h>

#include <cmath>

#include "gwldp/enumerate.hpp"
#include "gwldp/kullback.hpp"
#include "gwldp/model.hpp"
#include "gwldp/rng.hpp"
#include "gwldp/sampler.hpp"
#include "gwldp/spectral.hpp"

namespace {

using namespace gwldp;

GWModel binary_model() {
  RawModel raw;
  raw.alphabet = {"a"};
  raw.root_law = {1.0};
  raw.kernel = {{
      KernelEntry{OffspringConfig{}, 0.5},
      KernelEntry{OffspringConfig{{0, 0}}, 0.5},
  }};
  return validate_model(std::move(raw));
}

GWModel two_type_model() {
  RawModel raw;
  raw.alphabet = {"a", "b"};
  raw.root_law = {0.5, 0.5};
  raw.kernel = {
      {
          KernelEntry{OffspringConfig{}, 0.5},
          KernelEntry{OffspringConfig{{1}}, 0.5},
      },
      {
          KernelEntry{OffspringConfig{{0, 0}}, 1.0},
      },
  };
  return validate_model(std::move(raw));
}

void bench_analyze(benchmark::State& state) {
  GWModel model = two_type_model();
  for (auto _ : state) benchmark::DoNotOptimize(analyze(model));
}
BENCHMARK(bench_analyze);

void bench_spectral_potential(benchmark::State& state) {
  GWModel model = two_type_model();
  SpectralReport spectral = analyze(model);
  TestFunction g;
  g.set(0, OffspringConfig{}, 0.3);
  g.set(0, OffspringConfig{1}, -0.2);
  g.set(1, OffspringConfig{0, 0}, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_potential(g, spectral.eigenvector, model));
  }
}
BENCHMARK(bench_spectral_potential);

void bench_dual_value(benchmark::State& state) {
  GWModel model = two_type_model();
  SpectralReport spectral = analyze(model);
  OffspringMeasure rho;
  rho.set(0, OffspringConfig{}, 0.30);
  rho.set(0, OffspringConfig{1}, 0.30);
  rho.set(1, OffspringConfig{0, 0}, 0.40);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dual_value(spectral.eigenvector, model, rho));
  }
}
BENCHMARK(bench_dual_value);

void bench_size_distribution(benchmark::State& state) {
  GWModel model = binary_model();
  int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(exact_size_distribution(model, n_max));
}
BENCHMARK(bench_size_distribution)->Arg(64)->Arg(256);

void bench_count_census(benchmark::State& state) {
  GWModel model = two_type_model();
  int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_census_range(model, n_max));
}
BENCHMARK(bench_count_census)->Arg(32)->Arg(128);

void bench_enumerate(benchmark::State& state) {
  GWModel model = binary_model();
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    long long seen = 0;
    for_each_tree(model, n, 10000000, [&](const TypedTree&, double) { ++seen; });
    benchmark::DoNotOptimize(seen);
  }
}
BENCHMARK(bench_enumerate)->Arg(13)->Arg(17);

void bench_sample_conditioned(benchmark::State& state) {
  GWModel model = binary_model();
  RandomSource rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_conditioned(model, 21, rng));
  }
}
BENCHMARK(bench_sample_conditioned);

void bench_sample_tilted(benchmark::State& state) {
  GWModel model = binary_model();
  TestFunction g;
  g.set(0, OffspringConfig{}, std::log(2.0));
  TiltedModel tilted = tilt(model, g);
  RandomSource rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_tilted(tilted, rng, 100000));
  }
}
BENCHMARK(bench_sample_tilted);

}  // namespace

BENCHMARK_MAIN();
