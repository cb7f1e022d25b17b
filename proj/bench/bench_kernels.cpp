// Serial reference kernels against the OpenMP ones. The range argument of the
// parallel variants is the thread count.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "chordsim/kernels.hpp"

using namespace chordsim;

namespace {

GridSpec centre_grid(int n) {
  GridSpec g = GridSpec::desk();
  g.dims = {n, n};
  g.spacing = {16.0 / n, 16.0 / n};
  return g;
}

PhaseGrid noisy_grid(const GridSpec& spec) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n01;
  PhaseGrid w(spec);
  for (auto& v : w.samples()) v = {n01(rng), 0.0};
  return w;
}

Eigen::MatrixXd random_chords(int k) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  Eigen::MatrixXd etas(2, k);
  for (int j = 0; j < k; ++j) etas.col(j) << u(rng), u(rng);
  return etas;
}

GaussianSources sources(int count) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  GaussianSources s;
  s.centres = Eigen::MatrixXd(2, count);
  s.quench = Eigen::MatrixXd(2, 2 * count);
  for (int k = 0; k < count; ++k) {
    s.centres.col(k) << 2.0 * n01(rng), 2.0 * n01(rng);
    const Eigen::Vector2d l(0.5 * n01(rng), 0.5 * n01(rng));
    s.quench.middleCols(2 * k, 2) = l * l.transpose() + 0.05 * Eigen::Matrix2d::Identity();
    s.weights.push_back({n01(rng), n01(rng)});
  }
  return s;
}

void chord_samples_serial(benchmark::State& state) {
  const auto w = noisy_grid(centre_grid(64));
  const auto etas = random_chords(256);
  for (auto _ : state) benchmark::DoNotOptimize(chord_samples_reference(w, etas));
}

void chord_samples_parallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const auto w = noisy_grid(centre_grid(64));
  const auto etas = random_chords(256);
  for (auto _ : state) benchmark::DoNotOptimize(chord_samples(w, etas));
}

void source_sum_serial(benchmark::State& state) {
  const auto spec = conjugate_spec(centre_grid(128));
  const auto s = sources(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_source_sum_reference(spec, s));
}

void source_sum_parallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(1)));
  const auto spec = conjugate_spec(centre_grid(128));
  const auto s = sources(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_source_sum(spec, s));
}

void thread_counts(benchmark::internal::Benchmark* b) {
  const int max = omp_get_num_procs();
  for (int t = 1; t <= max; t *= 2) b->Arg(t);
  if (max & (max - 1)) b->Arg(max);
}

void source_args(benchmark::internal::Benchmark* b) {
  const int max = omp_get_num_procs();
  for (int k : {64, 512}) {
    for (int t = 1; t <= max; t *= 2) b->Args({k, t});
    if (max & (max - 1)) b->Args({k, max});
  }
}

}  // namespace

BENCHMARK(chord_samples_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(chord_samples_parallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(source_sum_serial)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(source_sum_parallel)->Apply(source_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
