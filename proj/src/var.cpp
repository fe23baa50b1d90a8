#include "kycvar/var.hpp"

#include <cmath>

#include "kycvar/errors.hpp"
#include "kycvar/normal.hpp"

namespace kycvar {

std::string_view to_string(RiskClass c) noexcept {
  switch (c) {
    case RiskClass::under_risked: return "under-risked";
    case RiskClass::aligned: return "aligned";
    case RiskClass::over_risked: return "over-risked";
  }
  return "aligned";
}

RiskClass classify(double discrepancy_bps, double band_bps) noexcept {
  if (discrepancy_bps < -band_bps) return RiskClass::under_risked;
  if (discrepancy_bps > band_bps) return RiskClass::over_risked;
  return RiskClass::aligned;
}

VarEvaluator::VarEvaluator(const BucketMarketModel& model, double alpha)
    : model_(&model), alpha_(alpha), z_(0.0) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw DomainError("alpha must lie in (0, 0.5]", "alpha");
  z_ = normal_quantile(alpha);
}

double VarEvaluator::bps(const Vec5& x) const {
  const auto& mu = model_->mu();
  const auto& cov = model_->covariance();
  double mean = 0.0;
  double variance = 0.0;
  for (std::size_t i = 0; i < kBuckets; ++i) {
    mean += x[i] * mu[i];
    double row = 0.0;
    for (std::size_t j = 0; j < kBuckets; ++j) row += cov[i][j] * x[j];
    variance += x[i] * row;
  }
  if (variance < 0.0) {
    if (variance < -1e-12) throw NumericalError("negative portfolio variance");
    variance = 0.0;
  }
  // Percent to bps, loss reported positive.
  return -(mean + std::sqrt(variance) * z_) * 100.0;
}

VaRQuote value_at_risk(const RiskAllocation& alloc, const BucketMarketModel& model, double alpha) {
  return {VarEvaluator(model, alpha).bps(alloc), alpha};
}

double var_dollars(double market_value, double value_bps) {
  if (!(market_value >= 0.0)) throw DomainError("market value must be nonnegative", "market_value");
  return market_value * value_bps / 10000.0;
}

double var_dollars(const RiskAllocation& alloc, const BucketMarketModel& model, double alpha,
                   double market_value) {
  return var_dollars(market_value, value_at_risk(alloc, model, alpha).value_bps);
}

long long to_cents(double dollars) noexcept {
  return static_cast<long long>(std::round(dollars * 100.0));
}

VaRDiscrepancy var_discrepancy(const RiskAllocation& profile, const RiskAllocation& portfolio,
                               const BucketMarketModel& model, double alpha, double band_bps) {
  const VarEvaluator eval(model, alpha);
  const double d = eval.bps(portfolio) - eval.bps(profile);
  return {d, classify(d, band_bps)};
}

}  // namespace kycvar
