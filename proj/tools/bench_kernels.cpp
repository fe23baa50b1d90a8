#include <benchmark/benchmark.h>

#include <random>

#include "kycvar/kernels.hpp"
#include "kycvar/synth.hpp"

namespace {

using namespace kycvar;

const Dataset& cohort() {
  static const Dataset data = [] {
    SynthSpec spec;
    spec.accounts = 5000;
    spec.dates = 5;
    return generate_synthetic(spec, ModelConfig{}, 7);
  }();
  return data;
}

std::vector<double> sample(std::size_t n) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

void BM_evaluate_serial(benchmark::State& st) {
  const auto& d = cohort();
  const ModelConfig cfg;
  for (auto _ : st) benchmark::DoNotOptimize(kernels::evaluate_serial(d.snapshots, VarEvaluator(cfg.model, cfg.alpha)));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(d.snapshots.size()));
}

void BM_evaluate_parallel(benchmark::State& st) {
  const auto& d = cohort();
  const ModelConfig cfg;
  for (auto _ : st) benchmark::DoNotOptimize(kernels::evaluate_parallel(d.snapshots, VarEvaluator(cfg.model, cfg.alpha)));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(d.snapshots.size()));
}

void BM_bootstrap_serial(benchmark::State& st) {
  const auto x = sample(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::bootstrap_means_serial(x, 1999, 11));
}

void BM_bootstrap_parallel(benchmark::State& st) {
  const auto x = sample(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::bootstrap_means_parallel(x, 1999, 11));
}

}  // namespace

BENCHMARK(BM_evaluate_serial);
BENCHMARK(BM_evaluate_parallel);
BENCHMARK(BM_bootstrap_serial)->Arg(200)->Arg(5000);
BENCHMARK(BM_bootstrap_parallel)->Arg(200)->Arg(5000);
BENCHMARK_MAIN();
