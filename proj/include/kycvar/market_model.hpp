#pragma once

#include <string>

#include "kycvar/types.hpp"

namespace kycvar {

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kPsdSlack = 1e-8;

/// Throws SchemaError for asymmetric, non-unit-diagonal, or out-of-range
/// entries and ModelValidationError when the minimum eigenvalue is below
/// -kPsdSlack.
void validate_correlation(const Mat5& rho);

double min_eigenvalue(const Mat5& symmetric);

/// diag(sigma) * rho * diag(sigma), in percent squared.
Mat5 build_covariance(const Vec5& sigma, const Mat5& rho);

/// Per-bucket expected annualized return and volatility (percent) with a
/// correlation matrix. Immutable after construction; the covariance is derived
/// once.
class BucketMarketModel {
 public:
  BucketMarketModel(const Vec5& mu, const Vec5& sigma, const Mat5& rho);

  /// Representative-ETF parameters used throughout the documentation and
  /// shipped in data/default_model.cfg.
  static BucketMarketModel reference();

  const Vec5& mu() const noexcept { return mu_; }
  const Vec5& sigma() const noexcept { return sigma_; }
  const Mat5& rho() const noexcept { return rho_; }
  const Mat5& covariance() const noexcept { return covariance_; }

 private:
  Vec5 mu_;
  Vec5 sigma_;
  Mat5 rho_;
  Mat5 covariance_;
};

/// A model plus the run parameters that travel with it in a config file.
struct ModelConfig {
  BucketMarketModel model = BucketMarketModel::reference();
  double alpha = 0.01;
  std::string horizon = "1d";  // label only; parameters are never rescaled

  /// 16 hex digits; stable hash of the canonical parameter text.
  std::string fingerprint() const;
  /// Canonical text form, shortest round-trip decimals.
  std::string canonical() const;
};

}  // namespace kycvar
