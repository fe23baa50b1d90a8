#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kycvar/allocation.hpp"
#include "kycvar/market_model.hpp"

namespace kycvar {

enum class PenaltyKind {
  identity,
  linear_diagonal,     // P_ii = i
  coupled_low_high,    // identity plus a single 1 at (Low, High)
  absolute_distance,   // P_ij = |i - j|
  asymmetric_over_risk,
  custom,
};

std::string_view to_string(PenaltyKind kind) noexcept;
std::optional<PenaltyKind> parse_penalty_kind(std::string_view name) noexcept;

/// Nonnegative 5x5 weighting for the quadratic allocation discrepancy.
/// Named kinds are checked against their exact shape on construction.
class PenaltyMatrix {
 public:
  PenaltyMatrix(PenaltyKind kind, const Mat5& entries);

  PenaltyKind kind() const noexcept { return kind_; }
  const Mat5& entries() const noexcept { return entries_; }
  bool symmetric() const noexcept;

 private:
  PenaltyKind kind_;
  Mat5 entries_;
};

/// Builds the matrix for a named kind. `custom` takes 25 row-major values.
PenaltyMatrix make_penalty(PenaltyKind kind, std::span<const double> params = {});

/// Units the allocations are expressed in before the quadratic form is taken.
/// Percent values are 10000x fraction values.
enum class Scale { percent, fraction };

struct DivergenceResult {
  double value = 0.0;
  std::string metric_id;
};

DivergenceResult quadratic_discrepancy(const RiskAllocation& x, const RiskAllocation& y,
                                       const PenaltyMatrix& p, Scale scale = Scale::percent);

DivergenceResult euclidean_distance(const RiskAllocation& x, const RiskAllocation& y,
                                    Scale scale = Scale::fraction);

inline constexpr double kDefaultKlEpsilon = 1e-6;

/// KL(x || y) after adding epsilon to every bucket of both and renormalizing.
/// Throws DomainError for epsilon <= 0.
DivergenceResult kl_divergence(const RiskAllocation& x, const RiskAllocation& y,
                               double epsilon = kDefaultKlEpsilon);

// ---------------------------------------------------------------------------
// Metric selection by identifier: var, euclid, quad:<kind>, kl.

enum class MetricFamily { var, euclid, quadratic, kl };

struct MetricSpec {
  MetricFamily family = MetricFamily::var;
  PenaltyKind penalty = PenaltyKind::identity;  // quadratic only
  std::string id;
};

/// Recognizes var, euclid, kl, quad:identity, quad:linear, quad:coupled,
/// quad:distance, quad:asym and quad:custom.
std::optional<MetricSpec> parse_metric(std::string_view id) noexcept;

const std::vector<std::string>& comparison_metric_ids();

struct MetricOptions {
  Scale scale = Scale::percent;
  double kl_epsilon = kDefaultKlEpsilon;
  double alpha = 0.01;
  std::optional<PenaltyMatrix> custom_penalty;
};

/// Evaluates one metric of `portfolio` against `profile`. The var family
/// returns the signed VaR discrepancy in bps.
double evaluate_metric(const MetricSpec& metric, const RiskAllocation& profile,
                       const RiskAllocation& portfolio, const BucketMarketModel& model,
                       const MetricOptions& options);

// ---------------------------------------------------------------------------

struct PathologyFlag {
  enum class Type { equidistance, kl_sign_loss, ranking_disagreement };
  Type type;
  std::string metric_id;
  std::size_t first = 0;   // candidate indices
  std::size_t second = 0;
  std::string message;
};

std::string_view to_string(PathologyFlag::Type type) noexcept;

struct PathologyReport {
  std::vector<std::string> metric_ids;           // columns, excluding VaR
  std::vector<std::vector<double>> values;       // [candidate][metric]
  std::vector<double> var_discrepancy_bps;       // [candidate]
  std::vector<PathologyFlag> flags;

  bool has(PathologyFlag::Type type, std::string_view metric_id = {}) const;
};

/// Scores every candidate under each comparison metric and under VaR
/// discrepancy, then flags:
///  - equidistance: equal identity-P value, different VaR discrepancy
///  - kl_sign_loss: equal KL value, VaR discrepancy differing in sign or size
///  - ranking_disagreement: ordering by |metric value| differs from ordering by
///    |VaR discrepancy| (stable sorts, ties resolved by input order)
/// Requires at least two candidates.
PathologyReport pathology_report(const RiskAllocation& profile,
                                 std::span<const RiskAllocation> candidates,
                                 const BucketMarketModel& model, const MetricOptions& options = {});

}  // namespace kycvar
