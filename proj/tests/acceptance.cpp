// Acceptance checks: one PASS/FAIL line per criterion. Run with no arguments
// for the full list, or `--only <id>` for a single criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kycvar/analytics.hpp"
#include "kycvar/metrics.hpp"
#include "kycvar/report.hpp"
#include "kycvar/synth.hpp"
#include "kycvar/text.hpp"
#include "kycvar/var.hpp"
#include "property_suite.hpp"

namespace {

using namespace kycvar;
using Clock = std::chrono::steady_clock;

// Tolerances
constexpr double kCornerTolBps = 3.0;
constexpr double kDiscrepancyTolBps = 5.0;
constexpr double kCovarianceTol = 5e-7;
constexpr double kVarTimeLimitMs = 1.0;
constexpr double kPropertyTimeLimitS = 30.0;
constexpr std::size_t kPropertyCases = 200;
constexpr double kUnderShareTarget = 0.867;
constexpr double kUnderShareTol = 0.03;
constexpr double kAnchorBps = 1216.0;
constexpr double kInfluxDeltaTolBps = 0.5;
constexpr double kCoverageTarget = 0.95;
constexpr double kCoverageTol = 0.03;
constexpr std::size_t kCoverageTrials = 500;
constexpr std::size_t kCoverageSample = 200;
constexpr std::size_t kCoverageResamples = 1999;
constexpr double kCohortTimeLimitS = 60.0;
constexpr std::size_t kCohortAccounts = 5000;
constexpr std::size_t kCohortDates = 30;
constexpr std::uint64_t kCohortSeed = 20190812;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v, int dp = 2) { return text::fixed(v, dp); }

Outcome corner_example() {
  Outcome o;
  const auto& model = BucketMarketModel::reference();
  struct Case {
    Bucket b;
    double expect;
  };
  for (const auto& c : {Case{Bucket::high, 3118}, Case{Bucket::low_medium, 1091}, Case{Bucket::low, -23}}) {
    const auto t0 = Clock::now();
    const double v = value_at_risk(RiskAllocation::one_hot(c.b), model, 0.01).value_bps;
    const double ms = 1e3 * seconds_since(t0);
    o.require(std::abs(v - c.expect) <= kCornerTolBps && ms < kVarTimeLimitMs,
              std::string(kBucketNames[index_of(c.b)]) + " " + num(v) + " bps (" + num(ms, 4) + " ms)");
  }
  const auto lm = RiskAllocation::one_hot(Bucket::low_medium);
  for (const auto& c : {Case{Bucket::low, -1114}, Case{Bucket::high, 2027}}) {
    const auto t0 = Clock::now();
    const double d = var_discrepancy(lm, RiskAllocation::one_hot(c.b), model, 0.01).value_bps;
    const double ms = 1e3 * seconds_since(t0);
    o.require(std::abs(d - c.expect) <= kDiscrepancyTolBps && ms < kVarTimeLimitMs,
              "d(LowMed->" + std::string(kBucketNames[index_of(c.b)]) + ") " + num(d) + " bps (" + num(ms, 4) + " ms)");
  }
  return o;
}

Outcome covariance() {
  const Mat5 printed{{{0.016900, -0.158158, -0.134784, -0.289432, 0.138502},
                      {-0.158158, 30.580900, 28.309176, 31.582936, 10.099992},
                      {-0.134784, 28.309176, 41.990400, 48.926592, 30.573936},
                      {-0.289432, 31.582936, 48.926592, 93.702400, 8.839776},
                      {0.138502, 10.099992, 30.573936, 8.839776, 231.648400}}};
  const auto cov = build_covariance({0.13, 5.53, 6.48, 9.68, 15.22}, BucketMarketModel::reference().rho());
  double worst = 0.0;
  for (std::size_t i = 0; i < kBuckets; ++i)
    for (std::size_t j = 0; j < kBuckets; ++j) worst = std::max(worst, std::abs(cov[i][j] - printed[i][j]));
  Outcome o;
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |diff| %.3g over 25 entries", worst);
  o.require(worst <= kCovarianceTol, buf);
  return o;
}

Outcome rebalance_table() {
  const auto p = make_penalty(PenaltyKind::linear_diagonal);
  const RiskAllocation x(Vec5{0, 0, 0, 80, 20});
  const double before = quadratic_discrepancy(x, RiskAllocation(Vec5{0, 16, 84, 0, 0}), p).value;
  const double after = quadratic_discrepancy(x, RiskAllocation(Vec5{0, 94, 6, 0, 0}), p).value;
  Outcome o;
  o.require(before == 49280.0, "before " + text::shortest(before));
  o.require(after == 45380.0, "after " + text::shortest(after));
  return o;
}

Outcome five_account_client() {
  // Printed per-account market values and VaRs; profile 1216 on every account.
  const std::vector<AccountMeasure> rows{{595152, 1216, 971}, {9883, 1216, 1089}, {288552, 1216, 882},
                                         {82302, 1216, 1089}, {67028, 1216, 1089}};
  const auto s = weighted_summary("client", Date(2019, 8, 12), rows);
  Outcome o;
  o.require(text::rounded(s.portfolio_bps) == "965", "portfolio " + text::rounded(s.portfolio_bps) + " (" + num(s.portfolio_bps, 4) + ") vs 965");
  o.require(text::rounded(s.discrepancy_bps) == "-251",
            "discrepancy " + text::rounded(s.discrepancy_bps) + " (" + num(s.discrepancy_bps, 4) + ") vs -251");
  o.require(text::rounded(s.mean_market_value) == "208583", "mean MV " + text::rounded(s.mean_market_value));
  return o;
}

Outcome dollar_line() {
  const long long cents = to_cents(var_dollars(113147, 10));
  Outcome o;
  o.require(cents == 11315, "113147 CAD x 10 bps = " + text::fixed(cents / 100.0, 2) + " CAD");
  return o;
}

Outcome pathology() {
  const auto& model = BucketMarketModel::reference();
  const auto e2 = RiskAllocation::one_hot(Bucket::low_medium);
  const auto e1 = RiskAllocation::one_hot(Bucket::low);
  const auto e5 = RiskAllocation::one_hot(Bucket::high);
  const auto ident = make_penalty(PenaltyKind::identity);
  Outcome o;
  const double a1 = quadratic_discrepancy(e2, e1, ident).value, a5 = quadratic_discrepancy(e2, e5, ident).value;
  o.require(a1 == a5, "(a) identity d(e2,e1)=" + text::shortest(a1) + " d(e2,e5)=" + text::shortest(a5));
  const double k1 = kl_divergence(e2, e1).value, k5 = kl_divergence(e2, e5).value;
  o.require(std::abs(k1 - k5) <= 1e-12, "(b) KL " + text::shortest(k1) + " vs " + text::shortest(k5));

  const RiskAllocation x(Vec5{0, 0, 0, 80, 20});
  const std::vector<RiskAllocation> cands{RiskAllocation(Vec5{0, 16, 84, 0, 0}), RiskAllocation(Vec5{0, 94, 6, 0, 0})};
  const auto rep = pathology_report(x, cands, model);
  const auto& lin = rep.values;
  std::size_t col = 0;
  while (rep.metric_ids[col] != "quad:linear") ++col;
  const bool scores_lower = lin[1][col] < lin[0][col];
  const bool var_larger = std::abs(rep.var_discrepancy_bps[1]) > std::abs(rep.var_discrepancy_bps[0]);
  const bool flag = rep.has(PathologyFlag::Type::ranking_disagreement, "quad:linear");
  o.require(scores_lower && var_larger && flag,
            "(c) after scores " + text::shortest(lin[1][col]) + " < " + text::shortest(lin[0][col]) + ", |VaR d| " +
                num(std::abs(rep.var_discrepancy_bps[1])) + " > " + num(std::abs(rep.var_discrepancy_bps[0])) +
                ", flag " + (flag ? "raised" : "missing"));
  return o;
}

Outcome properties() {
  const auto t0 = Clock::now();
  const auto results = props::run_all(kCohortSeed, kPropertyCases);
  const double secs = seconds_since(t0);
  Outcome o;
  for (const auto& r : results)
    o.require(r.cases >= 100 && r.failures == 0,
              r.name + " " + std::to_string(r.cases - r.failures) + "/" + std::to_string(r.cases) +
                  (r.failures ? " (" + r.first_failure + ")" : ""));
  o.require(secs < kPropertyTimeLimitS, "runtime " + num(secs) + " s");
  return o;
}

Outcome synthetic_cohort() {
  const auto t0 = Clock::now();
  Outcome o;
  SynthSpec spec;
  spec.accounts = kCohortAccounts;
  spec.dates = kCohortDates;
  spec.under_risked_share = kUnderShareTarget;
  const auto config = anchor_bucket_var(ModelConfig{}, Bucket::medium, kAnchorBps);
  const EvaluatedDataset data(generate_synthetic(spec, config, kCohortSeed), config);

  // Full report pipeline.
  const auto dir = std::filesystem::temp_directory_path() / "kycvar_acceptance";
  std::filesystem::remove_all(dir);
  std::size_t files = 0;
  for (auto k : {report::Kind::client, report::Kind::advisor, report::Kind::dealership, report::Kind::events,
                 report::Kind::clusters}) {
    report::Options opt;
    opt.kind = k;
    files += report::run(data, opt, dir / std::string(report::to_string(k))).size();
  }
  o.require(files > 0, std::to_string(data.snapshots().size()) + " rows, " + std::to_string(files) + " report files");

  double lo = 1.0, hi = 0.0;
  for (const auto& d : data.dates()) {
    const double s = under_risked_share(data, d);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  o.require(lo >= kUnderShareTarget - kUnderShareTol && hi <= kUnderShareTarget + kUnderShareTol,
            "under-risked share " + num(lo, 4) + ".." + num(hi, 4));

  StatisticSpec median;
  median.kind = Statistic::median;
  const auto series = group_timeseries(data, Grouping::dealership(), Measure::profile, median);
  double worst = 0.0;
  for (const auto& r : series.rows) worst = std::max(worst, std::abs(r.values[0] - kAnchorBps));
  o.require(series.rows.size() == kCohortDates && worst < 0.5,
            "median profile " + text::rounded(series.rows.front().values[0]) + " bps on " +
                std::to_string(series.rows.size()) + " dates (max dev " + num(worst, 6) + ")");

  const auto influx = cash_influx_study(data, 0.5);
  double max_delta = 0.0;
  for (const auto& e : influx.events) max_delta = std::max(max_delta, std::abs(e.delta_bps()));
  o.require(!influx.events.empty() && max_delta <= kInfluxDeltaTolBps,
            std::to_string(influx.events.size()) + " influx events, max |delta| " + num(max_delta, 4) + " bps");

  std::mt19937_64 rng(kCohortSeed);
  const double true_mean = 10.0;
  std::normal_distribution<double> nd(true_mean, 3.0);
  std::size_t covered = 0;
  std::vector<double> x(kCoverageSample);
  for (std::size_t t = 0; t < kCoverageTrials; ++t) {
    for (auto& v : x) v = nd(rng);
    const auto ci = bootstrap_mean_ci(x, kCoverageResamples, 0.95, kCohortSeed + t);
    if (ci.lower <= true_mean && true_mean <= ci.upper) ++covered;
  }
  const double coverage = static_cast<double>(covered) / kCoverageTrials;
  o.require(std::abs(coverage - kCoverageTarget) <= kCoverageTol, "bootstrap coverage " + num(coverage, 3));

  const double secs = seconds_since(t0);
  o.require(secs < kCohortTimeLimitS, "runtime " + num(secs) + " s");
  std::filesystem::remove_all(dir);
  return o;
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {"corner", "corner allocations and discrepancies", corner_example},
      {"covariance", "printed covariance matrix", covariance},
      {"rebalance", "linear-diagonal rebalancing example", rebalance_table},
      {"client", "five-account weighted client summary", five_account_client},
      {"dollar", "dollar VaR at cent precision", dollar_line},
      {"pathology", "metric pathology suite", pathology},
      {"properties", "randomized property suites", properties},
      {"cohort", "calibrated synthetic cohort", synthetic_cohort},
  };
  std::string only;
  if (argc == 3 && std::string(argv[1]) == "--only") {
    only = argv[2];
  } else if (argc == 2 && std::string(argv[1]) == "--list") {
    for (const auto& c : all) std::printf("%s\n", c.id);
    return 0;
  } else if (argc != 1) {
    std::fprintf(stderr, "usage: acceptance [--list | --only <id>]\n");
    return 2;
  }

  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (!only.empty() && only != c.id) continue;
    ++ran;
    const auto o = c.run();
    std::printf("%s %-10s %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str());
    if (!o.pass) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
