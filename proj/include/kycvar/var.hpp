#pragma once

#include <string_view>

#include "kycvar/allocation.hpp"
#include "kycvar/market_model.hpp"

namespace kycvar {

/// Loss quantile in basis points; positive means loss.
struct VaRQuote {
  double value_bps = 0.0;
  double alpha = 0.01;
};

enum class RiskClass { under_risked, aligned, over_risked };

std::string_view to_string(RiskClass c) noexcept;

struct VaRDiscrepancy {
  double value_bps = 0.0;  // portfolio minus profile
  RiskClass classification = RiskClass::aligned;
};

/// Under-risked iff value < -band, over-risked iff value > band.
RiskClass classify(double discrepancy_bps, double band_bps = 0.0) noexcept;

/// Parametric VaR evaluator with the normal quantile resolved once. Cheap to
/// copy; used by the batch kernels.
class VarEvaluator {
 public:
  VarEvaluator(const BucketMarketModel& model, double alpha);

  double bps(const Vec5& weights) const;
  double bps(const RiskAllocation& alloc) const { return bps(alloc.weights()); }

  double alpha() const noexcept { return alpha_; }
  double z() const noexcept { return z_; }
  const BucketMarketModel& model() const noexcept { return *model_; }

 private:
  const BucketMarketModel* model_;
  double alpha_;
  double z_;
};

VaRQuote value_at_risk(const RiskAllocation& alloc, const BucketMarketModel& model, double alpha);

/// market_value * value_bps / 10000. Throws DomainError for negative market value.
double var_dollars(double market_value, double value_bps);
double var_dollars(const RiskAllocation& alloc, const BucketMarketModel& model, double alpha,
                   double market_value);

/// Half-away-from-zero rounding to whole cents.
long long to_cents(double dollars) noexcept;

VaRDiscrepancy var_discrepancy(const RiskAllocation& profile, const RiskAllocation& portfolio,
                               const BucketMarketModel& model, double alpha, double band_bps = 0.0);

}  // namespace kycvar
