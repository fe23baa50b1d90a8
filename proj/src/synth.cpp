#include "kycvar/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <random>

#include "kycvar/errors.hpp"
#include "kycvar/var.hpp"

namespace kycvar {

namespace {

// Marginals loosely matched to the dealership cohort described in the
// documentation: income quartiles 37k/64k/100k, household assets quartiles
// 44k/113k/262k, age centred at 57.5 (sd 14.8).
constexpr double kIncomeMedian = 64000.0;
constexpr double kIncomeLogSd = 0.737;      // ln(100000/37000) / (2 * 0.6745)
constexpr double kAssetsMedian = 113147.0;
constexpr double kAssetsLogSd = 1.322;      // ln(262099/44041) / (2 * 0.6745)
constexpr double kAgeMean = 57.5;
constexpr double kAgeSd = 14.8;

constexpr std::array<double, 8> kAccountsPerClient = {13112, 8246, 4380, 1457, 330, 87, 20, 12};
constexpr std::array<double, 8> kAccountTypeWeights = {7843, 129, 204, 2975, 6169, 19979, 11080, 944};
constexpr std::array<AccountType, 8> kAccountTypes = {
    AccountType::cash, AccountType::lira, AccountType::rdsp, AccountType::resp,
    AccountType::rif,  AccountType::rsp,  AccountType::tfsa, AccountType::margin};
constexpr std::array<double, 3> kAdvisoryWeights = {4423, 44712, 1845};
constexpr std::array<AdvisoryType, 3> kAdvisoryTypes = {
    AdvisoryType::discretionary, AdvisoryType::non_discretionary, AdvisoryType::unknown};
constexpr std::array<double, 6> kResidencyWeights = {65.36, 13.85, 12.80, 4.07, 2.17, 1.75};
constexpr std::array<const char*, 6> kResidencies = {"ON", "BC", "AB", "MB", "NS", "Other"};

template <std::size_t N>
std::size_t pick(std::mt19937_64& rng, const std::array<double, N>& weights) {
  std::discrete_distribution<std::size_t> d(weights.begin(), weights.end());
  return d(rng);
}

std::string make_id(char prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, n);
  return buf;
}

Vec5 shift(const Vec5& w, double fraction, bool down) {
  Vec5 out = w;
  if (down) {
    for (std::size_t i = 1; i < kBuckets; ++i) {
      out[i] -= fraction * w[i];
      out[i - 1] += fraction * w[i];
    }
  } else {
    for (std::size_t i = 0; i + 1 < kBuckets; ++i) {
      out[i] -= fraction * w[i];
      out[i + 1] += fraction * w[i];
    }
  }
  for (auto& v : out) v = std::max(v, 0.0);
  return out;
}

class Drifter {
 public:
  Drifter(const SynthSpec& spec, const VarEvaluator& eval) : spec_(spec), eval_(eval) {}

  RiskAllocation portfolio(const RiskAllocation& profile, bool under, std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> frac(spec_.drift_min, spec_.drift_max);
    const double profile_var = eval_.bps(profile);
    for (double f : {frac(rng), 1.0}) {
      const auto candidate = quantize_micro(RiskAllocation(shift(profile.weights(), f, under)));
      const double d = eval_.bps(candidate) - profile_var;
      if (under ? d <= 0.0 : d > 0.0) return candidate;
    }
    if (under) return profile;
    // One-hot High maximizes VaR over the simplex when its VaR is the largest
    // corner (VaR is convex in the weights).
    return RiskAllocation::one_hot(Bucket::high);
  }

 private:
  const SynthSpec& spec_;
  const VarEvaluator& eval_;
};

}  // namespace

void SynthSpec::validate() const {
  if (accounts < 1) throw DomainError("accounts must be at least 1", "accounts");
  if (advisors < 1) throw DomainError("advisors must be at least 1", "advisors");
  if (dates < 1) throw DomainError("dates must be at least 1", "dates");
  for (auto [v, name] : {std::pair{under_risked_share, "under_risked_share"},
                         std::pair{medium_profile_share, "medium_profile_share"},
                         std::pair{influx_rate, "influx_rate"},
                         std::pair{rebalance_rate, "rebalance_rate"},
                         std::pair{kyc_change_rate, "kyc_change_rate"}}) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]", name);
  }
  if (!(drift_min >= 0.0 && drift_max <= 1.0 && drift_min <= drift_max))
    throw DomainError("drift range must satisfy 0 <= drift_min <= drift_max <= 1", "drift");
  if (!(daily_volatility >= 0.0 && daily_volatility < 0.1))
    throw DomainError("daily_volatility must lie in [0, 0.1)", "daily_volatility");
}

const std::vector<Vec5>& profile_catalogue() {
  static const std::vector<Vec5> catalogue = {
      {0, 0, 1, 0, 0},         {0, 1, 0, 0, 0},         {0.2, 0.1, 0.7, 0, 0},
      {0, 0.3, 0.7, 0, 0},     {0, 0, 0.5, 0.5, 0},     {0, 0, 0.5, 0, 0.5},
      {0, 0, 0, 0.8, 0.2},     {0.1, 0.2, 0.4, 0.2, 0.1},
  };
  return catalogue;
}

ModelConfig anchor_bucket_var(const ModelConfig& config, Bucket bucket, double target_bps) {
  const VarEvaluator eval(config.model, config.alpha);
  Vec5 mu = config.model.mu();
  const auto k = index_of(bucket);
  mu[k] = -target_bps / 100.0 - config.model.sigma()[k] * eval.z();
  ModelConfig out = config;
  out.model = BucketMarketModel(mu, config.model.sigma(), config.model.rho());
  return out;
}

Dataset generate_synthetic(const SynthSpec& spec, const ModelConfig& config, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  const VarEvaluator eval(config.model, config.alpha);
  const Drifter drifter(spec, eval);
  const auto& catalogue = profile_catalogue();

  std::vector<double> profile_weights(catalogue.size(),
                                      (1.0 - spec.medium_profile_share) /
                                          static_cast<double>(catalogue.size() - 1));
  profile_weights[0] = spec.medium_profile_share;
  std::discrete_distribution<std::size_t> pick_profile(profile_weights.begin(),
                                                       profile_weights.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  struct AccountPlan {
    AccountSnapshot base;
    bool under = true;
    double market_value = 0.0;
    std::optional<std::size_t> kyc_change_at;
    RiskAllocation new_profile = RiskAllocation::one_hot(Bucket::medium);
  };

  Dataset out;
  std::vector<AccountPlan> plans;
  plans.reserve(spec.accounts);
  const int account_width = std::max(6, static_cast<int>(std::to_string(spec.accounts).size()));

  while (plans.size() < spec.accounts) {
    ClientRecord c;
    c.client_id = make_id('C', out.clients.size() + 1, account_width);
    c.age = static_cast<int>(std::clamp(std::round(kAgeMean + kAgeSd * normal(rng)), 18.0, 104.0));
    c.gender = unit(rng) < 0.505 ? Gender::male : Gender::female;
    c.annual_income = std::min(
        15e6, std::round(kIncomeMedian * std::exp(kIncomeLogSd * normal(rng)) / 100.0) * 100.0);
    c.investment_knowledge = static_cast<int>(pick(rng, std::array<double, 4>{17.6, 35.2, 44.7, 2.5})) + 1;
    c.marital_status = std::array{MaritalStatus::married, MaritalStatus::single,
                                  MaritalStatus::unknown, MaritalStatus::divorced}
        [pick(rng, std::array<double, 4>{67, 18, 11, 4})];
    c.residency = kResidencies[pick(rng, kResidencyWeights)];
    c.retired = std::array{Retired::no, Retired::yes, Retired::unknown}
        [pick(rng, std::array<double, 3>{73.9, 18.2, 7.9})];
    c.cluster_label = static_cast<int>(rng() % 5) + 1;

    const std::string advisor =
        make_id('V', static_cast<std::size_t>(rng() % spec.advisors) + 1, 4);
    const auto profile = quantize_micro(RiskAllocation(catalogue[pick_profile(rng)]));
    const double assets = std::max(1000.0, kAssetsMedian * std::exp(kAssetsLogSd * normal(rng)));
    const std::size_t n_accounts =
        std::min(pick(rng, kAccountsPerClient) + 1, spec.accounts - plans.size());

    std::vector<double> shares(n_accounts);
    std::exponential_distribution<double> gamma1(1.0);
    for (auto& s : shares) s = gamma1(rng) + 0.05;
    const double share_sum = std::accumulate(shares.begin(), shares.end(), 0.0);

    for (std::size_t a = 0; a < n_accounts; ++a) {
      AccountPlan p;
      p.base.account_id = make_id('A', plans.size() + 1, account_width);
      p.base.client_id = c.client_id;
      p.base.advisor_id = advisor;
      p.base.account_type = kAccountTypes[pick(rng, kAccountTypeWeights)];
      p.base.advisory_type = kAdvisoryTypes[pick(rng, kAdvisoryWeights)];
      p.base.profile = profile;
      p.under = unit(rng) < spec.under_risked_share;
      p.base.portfolio = drifter.portfolio(profile, p.under, rng);
      p.market_value = std::max(100.0, std::round(assets * shares[a] / share_sum * 100.0) / 100.0);
      if (spec.dates >= 3 && unit(rng) < spec.kyc_change_rate) {
        const std::size_t lo = spec.dates / 3;
        const std::size_t hi = 2 * spec.dates / 3;
        p.kyc_change_at = lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
        std::size_t k = pick_profile(rng);
        if (catalogue[k] == profile.weights() || quantize_micro(RiskAllocation(catalogue[k])) == profile)
          k = (k + 1) % catalogue.size();
        p.new_profile = quantize_micro(RiskAllocation(catalogue[k]));
      }
      plans.push_back(std::move(p));
    }
    out.clients.push_back(std::move(c));
  }

  Date date = spec.start.weekend() ? spec.start.next_weekday() : spec.start;
  out.snapshots.reserve(spec.accounts * spec.dates);
  for (std::size_t t = 0; t < spec.dates; ++t) {
    for (auto& p : plans) {
      if (t > 0) {
        const double noise = std::clamp(spec.daily_volatility * normal(rng), -0.02, 0.02);
        p.market_value *= 1.0 + noise;
        if (unit(rng) < spec.influx_rate) {
          p.market_value *= 1.0 + 0.6 + 0.9 * unit(rng);
        } else if (unit(rng) < spec.rebalance_rate) {
          p.base.portfolio = drifter.portfolio(p.base.profile, p.under, rng);
        }
        p.market_value = std::round(p.market_value * 100.0) / 100.0;
        if (p.kyc_change_at && *p.kyc_change_at == t) p.base.profile = p.new_profile;
      }
      AccountSnapshot s = p.base;
      s.date = date;
      s.market_value = p.market_value;
      out.snapshots.push_back(std::move(s));
    }
    date = date.next_weekday();
  }
  return out;
}

}  // namespace kycvar
