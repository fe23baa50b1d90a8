#include <doctest.h>

#include <sstream>

#include "kycvar/analytics.hpp"
#include "kycvar/errors.hpp"
#include "kycvar/synth.hpp"

using namespace kycvar;

namespace {

std::string csv(const Dataset& d) {
  std::ostringstream out;
  write_snapshots(d.snapshots, out);
  write_clients(d.clients, out);
  return out.str();
}

}  // namespace

TEST_CASE("generator is seed deterministic") {
  SynthSpec spec;
  spec.accounts = 100;
  spec.dates = 10;
  const auto a = generate_synthetic(spec, ModelConfig{}, 11);
  const auto b = generate_synthetic(spec, ModelConfig{}, 11);
  const auto c = generate_synthetic(spec, ModelConfig{}, 12);
  CHECK(a.snapshots.size() == 1000);
  CHECK(csv(a) == csv(b));
  CHECK(csv(a) != csv(c));
}

TEST_CASE("generated rows pass strict validation") {
  SynthSpec spec;
  spec.accounts = 200;
  spec.dates = 15;
  spec.influx_rate = 0.05;
  spec.rebalance_rate = 0.05;
  spec.kyc_change_rate = 0.3;
  const auto d = generate_synthetic(spec, ModelConfig{}, 5);
  std::ostringstream out;
  write_snapshots(d.snapshots, out);
  std::istringstream in(out.str());
  const auto parsed = parse_snapshots(in, Strictness::strict);
  CHECK(parsed.snapshots.size() == d.snapshots.size());
  CHECK(parsed.manifest.accounts == 200);
  CHECK(parsed.manifest.dates == 15);
  for (const auto& c : d.clients) CHECK_NOTHROW(c.validate());
  for (const auto& s : d.snapshots) CHECK_FALSE(s.date.weekend());
}

TEST_CASE("full downward shift makes every discrepancy negative") {
  SynthSpec spec;
  spec.accounts = 500;
  spec.dates = 3;
  spec.under_risked_share = 1.0;
  spec.drift_min = spec.drift_max = 1.0;
  spec.influx_rate = spec.rebalance_rate = spec.kyc_change_rate = 0.0;
  const EvaluatedDataset e(generate_synthetic(spec, ModelConfig{}, 8), ModelConfig{});
  for (const auto& m : e.measures()) CHECK(m.discrepancy_bps() < 0.0);
}

TEST_CASE("under-risked share tracks its target") {
  SynthSpec spec;
  spec.accounts = 2000;
  spec.dates = 2;
  const EvaluatedDataset e(generate_synthetic(spec, ModelConfig{}, 21), ModelConfig{});
  CHECK(std::abs(under_risked_share(e, e.dates().front()) - 0.867) <= 0.03);
}

TEST_CASE("anchoring pins the one-hot VaR") {
  const auto cfg = anchor_bucket_var(ModelConfig{}, Bucket::medium, 1216.0);
  const VarEvaluator eval(cfg.model, cfg.alpha);
  CHECK(eval.bps(RiskAllocation::one_hot(Bucket::medium)) == doctest::Approx(1216.0).epsilon(1e-12));
  CHECK(eval.bps(RiskAllocation::one_hot(Bucket::high)) == doctest::Approx(3117.701).epsilon(1e-6));
  CHECK(cfg.model.sigma() == ModelConfig{}.model.sigma());
}

TEST_CASE("spec validation") {
  SynthSpec s;
  s.accounts = 0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = SynthSpec{};
  s.drift_min = 0.7;
  s.drift_max = 0.2;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = SynthSpec{};
  s.under_risked_share = 1.2;
  CHECK_THROWS_AS(s.validate(), DomainError);
  CHECK_THROWS_AS(generate_synthetic(s, ModelConfig{}, 1), DomainError);
}
