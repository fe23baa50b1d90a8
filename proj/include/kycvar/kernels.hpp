#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kycvar/dataset.hpp"
#include "kycvar/var.hpp"

// Data-parallel inner loops. Every kernel has a serial reference with the
// same signature; the OpenMP version must produce bit-identical output.
namespace kycvar::kernels {

/// Per-account VaR measures in bps.
struct AccountMeasure {
  double market_value = 0.0;
  double profile_bps = 0.0;
  double portfolio_bps = 0.0;

  double discrepancy_bps() const noexcept { return portfolio_bps - profile_bps; }
};

std::vector<AccountMeasure> evaluate_serial(std::span<const AccountSnapshot> snapshots,
                                            const VarEvaluator& eval);
std::vector<AccountMeasure> evaluate_parallel(std::span<const AccountSnapshot> snapshots,
                                              const VarEvaluator& eval);

/// Seed for resample `index` of stream `seed`; splitmix64 finalizer.
std::uint64_t resample_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Means of `resamples` with-replacement resamples of `values` (size n each).
/// Resample b draws from its own generator seeded by resample_seed(seed, b),
/// so results do not depend on thread count or schedule.
std::vector<double> bootstrap_means_serial(std::span<const double> values, std::size_t resamples,
                                           std::uint64_t seed);
std::vector<double> bootstrap_means_parallel(std::span<const double> values,
                                             std::size_t resamples, std::uint64_t seed);

int max_threads() noexcept;

}  // namespace kycvar::kernels
