#include "kycvar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kycvar/errors.hpp"
#include "kycvar/text.hpp"
#include "kycvar/var.hpp"

namespace kycvar {

namespace {

constexpr double kTieTolerance = 1e-12;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

Mat5 kind_entries(PenaltyKind kind) {
  Mat5 m{};
  for (std::size_t i = 0; i < kBuckets; ++i) {
    for (std::size_t j = 0; j < kBuckets; ++j) {
      const double dist = std::abs(static_cast<double>(i) - static_cast<double>(j));
      switch (kind) {
        case PenaltyKind::identity:
        case PenaltyKind::coupled_low_high: m[i][j] = i == j ? 1.0 : 0.0; break;
        case PenaltyKind::linear_diagonal: m[i][j] = i == j ? static_cast<double>(i + 1) : 0.0; break;
        case PenaltyKind::absolute_distance: m[i][j] = dist; break;
        case PenaltyKind::asymmetric_over_risk: m[i][j] = j >= i ? dist : 1.0; break;
        case PenaltyKind::custom: break;
      }
    }
  }
  // Only the (Low, High) cell is coupled; (High, Low) stays zero.
  if (kind == PenaltyKind::coupled_low_high) m[0][4] = 1.0;
  if (kind == PenaltyKind::asymmetric_over_risk)
    for (std::size_t i = 0; i < kBuckets; ++i) m[i][i] = 0.0;
  return m;
}

double scale_factor(Scale s) { return s == Scale::percent ? 100.0 : 1.0; }

}  // namespace

std::string_view to_string(PenaltyKind kind) noexcept {
  switch (kind) {
    case PenaltyKind::identity: return "identity";
    case PenaltyKind::linear_diagonal: return "linear";
    case PenaltyKind::coupled_low_high: return "coupled";
    case PenaltyKind::absolute_distance: return "distance";
    case PenaltyKind::asymmetric_over_risk: return "asym";
    case PenaltyKind::custom: return "custom";
  }
  return "custom";
}

std::optional<PenaltyKind> parse_penalty_kind(std::string_view name) noexcept {
  for (auto k : {PenaltyKind::identity, PenaltyKind::linear_diagonal,
                 PenaltyKind::coupled_low_high, PenaltyKind::absolute_distance,
                 PenaltyKind::asymmetric_over_risk, PenaltyKind::custom}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

PenaltyMatrix::PenaltyMatrix(PenaltyKind kind, const Mat5& entries) : kind_(kind), entries_(entries) {
  for (const auto& row : entries_) {
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0) {
        throw DomainError("penalty entries must be nonnegative, got " + text::shortest(v),
                          "penalty");
      }
    }
  }
  if (kind_ != PenaltyKind::custom && entries_ != kind_entries(kind_)) {
    throw SchemaError("penalty matrix does not match the '" + std::string(to_string(kind_)) +
                          "' shape",
                      "penalty");
  }
}

bool PenaltyMatrix::symmetric() const noexcept {
  for (std::size_t i = 0; i < kBuckets; ++i)
    for (std::size_t j = i + 1; j < kBuckets; ++j)
      if (entries_[i][j] != entries_[j][i]) return false;
  return true;
}

PenaltyMatrix make_penalty(PenaltyKind kind, std::span<const double> params) {
  if (kind != PenaltyKind::custom) return PenaltyMatrix(kind, kind_entries(kind));
  if (params.size() != kBuckets * kBuckets) {
    throw SchemaError("custom penalty needs 25 values, got " + std::to_string(params.size()),
                      "penalty");
  }
  Mat5 m{};
  for (std::size_t i = 0; i < kBuckets; ++i)
    for (std::size_t j = 0; j < kBuckets; ++j) m[i][j] = params[i * kBuckets + j];
  return PenaltyMatrix(PenaltyKind::custom, m);
}

DivergenceResult quadratic_discrepancy(const RiskAllocation& x, const RiskAllocation& y,
                                       const PenaltyMatrix& p, Scale scale) {
  const double f = scale_factor(scale);
  Vec5 diff{};
  for (std::size_t i = 0; i < kBuckets; ++i) diff[i] = (x[i] - y[i]) * f;
  double value = 0.0;
  for (std::size_t i = 0; i < kBuckets; ++i)
    for (std::size_t j = 0; j < kBuckets; ++j) value += diff[i] * p.entries()[i][j] * diff[j];
  return {value, "quad:" + std::string(to_string(p.kind()))};
}

DivergenceResult euclidean_distance(const RiskAllocation& x, const RiskAllocation& y, Scale scale) {
  const auto q = quadratic_discrepancy(x, y, make_penalty(PenaltyKind::identity), scale);
  return {std::sqrt(q.value), "euclid"};
}

DivergenceResult kl_divergence(const RiskAllocation& x, const RiskAllocation& y, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw DomainError("KL smoothing epsilon must be positive", "epsilon");
  }
  const double norm = 1.0 + static_cast<double>(kBuckets) * epsilon;
  double value = 0.0;
  for (std::size_t i = 0; i < kBuckets; ++i) {
    const double xs = (x[i] + epsilon) / norm;
    const double ys = (y[i] + epsilon) / norm;
    value += xs * std::log(xs / ys);
  }
  return {std::max(value, 0.0), "kl"};
}

std::optional<MetricSpec> parse_metric(std::string_view id) noexcept {
  if (id == "var") return MetricSpec{MetricFamily::var, PenaltyKind::identity, "var"};
  if (id == "euclid") return MetricSpec{MetricFamily::euclid, PenaltyKind::identity, "euclid"};
  if (id == "kl") return MetricSpec{MetricFamily::kl, PenaltyKind::identity, "kl"};
  if (id.starts_with("quad:")) {
    if (auto k = parse_penalty_kind(id.substr(5)))
      return MetricSpec{MetricFamily::quadratic, *k, std::string(id)};
  }
  return std::nullopt;
}

const std::vector<std::string>& comparison_metric_ids() {
  static const std::vector<std::string> ids = {"euclid",        "quad:identity", "quad:linear",
                                               "quad:coupled",  "quad:distance", "quad:asym",
                                               "kl"};
  return ids;
}

double evaluate_metric(const MetricSpec& metric, const RiskAllocation& profile,
                       const RiskAllocation& portfolio, const BucketMarketModel& model,
                       const MetricOptions& options) {
  switch (metric.family) {
    case MetricFamily::var:
      return var_discrepancy(profile, portfolio, model, options.alpha).value_bps;
    case MetricFamily::euclid:
      return euclidean_distance(profile, portfolio, options.scale).value;
    case MetricFamily::kl:
      return kl_divergence(profile, portfolio, options.kl_epsilon).value;
    case MetricFamily::quadratic: {
      if (metric.penalty == PenaltyKind::custom) {
        if (!options.custom_penalty) {
          throw SchemaError("quad:custom needs a 25-value penalty", "penalty");
        }
        return quadratic_discrepancy(profile, portfolio, *options.custom_penalty, options.scale)
            .value;
      }
      return quadratic_discrepancy(profile, portfolio, make_penalty(metric.penalty), options.scale)
          .value;
    }
  }
  return 0.0;
}

std::string_view to_string(PathologyFlag::Type type) noexcept {
  switch (type) {
    case PathologyFlag::Type::equidistance: return "equidistance";
    case PathologyFlag::Type::kl_sign_loss: return "kl_sign_loss";
    case PathologyFlag::Type::ranking_disagreement: return "ranking_disagreement";
  }
  return "";
}

bool PathologyReport::has(PathologyFlag::Type type, std::string_view metric_id) const {
  return std::any_of(flags.begin(), flags.end(), [&](const PathologyFlag& f) {
    return f.type == type && (metric_id.empty() || f.metric_id == metric_id);
  });
}

PathologyReport pathology_report(const RiskAllocation& profile,
                                 std::span<const RiskAllocation> candidates,
                                 const BucketMarketModel& model, const MetricOptions& options) {
  if (candidates.size() < 2) throw DomainError("pathology report needs at least two candidates");

  PathologyReport report;
  report.metric_ids = comparison_metric_ids();
  const std::size_t n = candidates.size();
  const VarEvaluator eval(model, options.alpha);
  const double profile_var = eval.bps(profile);

  for (const auto& c : candidates) {
    report.var_discrepancy_bps.push_back(eval.bps(c) - profile_var);
    std::vector<double> row;
    for (const auto& id : report.metric_ids) {
      row.push_back(evaluate_metric(*parse_metric(id), profile, c, model, options));
    }
    report.values.push_back(std::move(row));
  }

  const auto& v = report.var_discrepancy_bps;
  const auto column = [&](std::string_view id) {
    const auto it = std::find(report.metric_ids.begin(), report.metric_ids.end(), id);
    return static_cast<std::size_t>(it - report.metric_ids.begin());
  };

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t qi = column("quad:identity");
      if (nearly_equal(report.values[a][qi], report.values[b][qi]) && !nearly_equal(v[a], v[b])) {
        report.flags.push_back({PathologyFlag::Type::equidistance, "quad:identity", a, b,
                                "identity penalty scores candidates " + std::to_string(a) +
                                    " and " + std::to_string(b) +
                                    " equally although their VaR discrepancies differ"});
      }
      const std::size_t ki = column("kl");
      const bool sign_differs = (v[a] < 0.0) != (v[b] < 0.0);
      if (nearly_equal(report.values[a][ki], report.values[b][ki]) && !nearly_equal(v[a], v[b])) {
        report.flags.push_back({PathologyFlag::Type::kl_sign_loss, "kl", a, b,
                                std::string("KL scores candidates equally, losing the ") +
                                    (sign_differs ? "sign" : "magnitude") +
                                    " of the VaR discrepancy"});
      }
    }
  }

  // Ranking comparison: ascending by |metric value| and by |VaR discrepancy|.
  std::vector<std::size_t> var_order(n);
  std::iota(var_order.begin(), var_order.end(), 0);
  std::stable_sort(var_order.begin(), var_order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(v[a]) < std::abs(v[b]) && !nearly_equal(std::abs(v[a]), std::abs(v[b]));
  });
  std::vector<std::size_t> var_rank(n);
  for (std::size_t r = 0; r < n; ++r) var_rank[var_order[r]] = r;

  for (std::size_t m = 0; m < report.metric_ids.size(); ++m) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double x = std::abs(report.values[a][m]);
      const double y = std::abs(report.values[b][m]);
      return x < y && !nearly_equal(x, y);
    });
    if (order == var_order) continue;
    // Report the first inverted pair for context.
    for (std::size_t r = 0; r + 1 < n; ++r) {
      for (std::size_t s = r + 1; s < n; ++s) {
        if (var_rank[order[r]] > var_rank[order[s]]) {
          report.flags.push_back(
              {PathologyFlag::Type::ranking_disagreement, report.metric_ids[m], order[r],
               order[s],
               report.metric_ids[m] + " ranks candidate " + std::to_string(order[r]) +
                   " closer than candidate " + std::to_string(order[s]) +
                   ", VaR discrepancy ranks them the other way"});
          r = n;
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace kycvar
