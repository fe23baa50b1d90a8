#include "kycvar/kernels.hpp"

#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kycvar::kernels {

namespace {

AccountMeasure measure(const AccountSnapshot& s, const VarEvaluator& eval) {
  return {s.market_value, eval.bps(s.profile), eval.bps(s.portfolio)};
}

double resample_mean(std::span<const double> values, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += values[pick(rng)];
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::vector<AccountMeasure> evaluate_serial(std::span<const AccountSnapshot> snapshots,
                                            const VarEvaluator& eval) {
  std::vector<AccountMeasure> out(snapshots.size());
  for (std::size_t i = 0; i < snapshots.size(); ++i) out[i] = measure(snapshots[i], eval);
  return out;
}

std::vector<AccountMeasure> evaluate_parallel(std::span<const AccountSnapshot> snapshots,
                                              const VarEvaluator& eval) {
  std::vector<AccountMeasure> out(snapshots.size());
  const auto n = static_cast<std::ptrdiff_t>(snapshots.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = measure(snapshots[i], eval);
  return out;
}

std::uint64_t resample_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> bootstrap_means_serial(std::span<const double> values, std::size_t resamples,
                                           std::uint64_t seed) {
  std::vector<double> out(values.empty() ? 0 : resamples);
  for (std::size_t b = 0; b < out.size(); ++b) out[b] = resample_mean(values, resample_seed(seed, b));
  return out;
}

std::vector<double> bootstrap_means_parallel(std::span<const double> values,
                                             std::size_t resamples, std::uint64_t seed) {
  std::vector<double> out(values.empty() ? 0 : resamples);
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < n; ++b)
    out[b] = resample_mean(values, resample_seed(seed, static_cast<std::uint64_t>(b)));
  return out;
}

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace kycvar::kernels
