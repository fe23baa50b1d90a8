#include <doctest.h>

#include <cmath>

#include "kycvar/errors.hpp"
#include "kycvar/normal.hpp"
#include "kycvar/var.hpp"

using namespace kycvar;

namespace {

const Mat5 kPrintedSigma{{{0.016900, -0.158158, -0.134784, -0.289432, 0.138502},
                          {-0.158158, 30.580900, 28.309176, 31.582936, 10.099992},
                          {-0.134784, 28.309176, 41.990400, 48.926592, 30.573936},
                          {-0.289432, 31.582936, 48.926592, 93.702400, 8.839776},
                          {0.138502, 10.099992, 30.573936, 8.839776, 231.648400}}};

Mat5 identity() {
  Mat5 m{};
  for (std::size_t i = 0; i < kBuckets; ++i) m[i][i] = 1.0;
  return m;
}

double var_of(const Vec5& w) {
  return value_at_risk(RiskAllocation(w), BucketMarketModel::reference(), 0.01).value_bps;
}

}  // namespace

TEST_CASE("normal quantile") {
  // scipy.stats.norm.ppf(0.01)
  CHECK(normal_quantile(0.01) == doctest::Approx(-2.326347874040841).epsilon(1e-12));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-10));
  CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
}

TEST_CASE("covariance matches the printed matrix") {
  const auto& m = BucketMarketModel::reference();
  CHECK(m.covariance()[0][1] == doctest::Approx(-0.158158).epsilon(1e-12));
  for (std::size_t i = 0; i < kBuckets; ++i)
    for (std::size_t j = 0; j < kBuckets; ++j) {
      CHECK(std::abs(m.covariance()[i][j] - kPrintedSigma[i][j]) <= 5e-7);
      CHECK(m.covariance()[i][j] == m.covariance()[j][i]);
    }
}

TEST_CASE("identity correlation gives diagonal covariance") {
  const auto s = build_covariance({0.13, 5.53, 6.48, 9.68, 15.22}, identity());
  CHECK(s[4][4] == doctest::Approx(231.6484).epsilon(1e-12));
  CHECK(s[0][4] == 0.0);
}

TEST_CASE("correlation validation") {
  auto rho = BucketMarketModel::reference().rho();
  auto asym = rho;
  asym[0][1] = -0.21;
  CHECK_THROWS_AS(validate_correlation(asym), SchemaError);
  auto diag = rho;
  diag[2][2] = 0.99;
  CHECK_THROWS_AS(validate_correlation(diag), SchemaError);
  auto range = rho;
  range[0][1] = range[1][0] = 1.5;
  CHECK_THROWS_AS(validate_correlation(range), SchemaError);

  // Three mutually anti-correlated assets at -0.9 cannot coexist.
  Mat5 bad = identity();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) bad[i][j] = -0.9;
  try {
    validate_correlation(bad);
    FAIL("expected ModelValidationError");
  } catch (const ModelValidationError& e) {
    CHECK(e.eigenvalue() == doctest::Approx(-0.8));
    CHECK(e.field() == "rho");
  }
  CHECK(min_eigenvalue(rho) == doctest::Approx(0.1107).epsilon(1e-3));
  CHECK_THROWS_AS(build_covariance({-1, 1, 1, 1, 1}, identity()), Error);
}

TEST_CASE("VaR of corner allocations") {
  CHECK(var_of({0, 0, 0, 0, 1}) == doctest::Approx(3117.701).epsilon(1e-6));
  CHECK(std::lround(var_of({0, 0, 0, 0, 1})) == 3118);
  CHECK(std::abs(var_of({1, 0, 0, 0, 0}) - -22.0) <= 3.0);
  // corner ordering
  double prev = -1e9;
  for (std::size_t k = 0; k < kBuckets; ++k) {
    const double v = var_of(RiskAllocation::one_hot(static_cast<Bucket>(k)).weights());
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("VaR of a two-bucket mix by hand expansion") {
  // m = 0.5*2.21 + 0.5*4.23; s^2 = 0.25*(41.9904 + 231.6484) + 2*0.25*30.573936
  const double m = 0.5 * 2.21 + 0.5 * 4.23;
  const double s = std::sqrt(0.25 * 41.9904 + 0.25 * 231.6484 + 0.5 * 30.573936);
  const double expect = -(m + s * -2.326347874040841) * 100.0;
  CHECK(var_of({0, 0, 0.5, 0, 0.5}) == doctest::Approx(expect).epsilon(1e-9));
  CHECK(std::lround(expect) == 1806);
}

TEST_CASE("zero volatility is pure drift") {
  const BucketMarketModel m({0.52, 1.97, 2.21, 2.93, 4.23}, {0, 0, 0, 0, 0}, identity());
  const RiskAllocation x(Vec5{0.2, 0.1, 0.7, 0, 0});
  CHECK(value_at_risk(x, m, 0.01).value_bps == doctest::Approx(-100.0 * (0.2 * 0.52 + 0.1 * 1.97 + 0.7 * 2.21)));
}

TEST_CASE("alpha domain") {
  const auto& m = BucketMarketModel::reference();
  CHECK_THROWS_AS(VarEvaluator(m, 0.0), DomainError);
  CHECK_THROWS_AS(VarEvaluator(m, 0.6), DomainError);
  CHECK_NOTHROW(VarEvaluator(m, 0.5));
  CHECK(VarEvaluator(m, 0.5).bps(Vec5{0, 0, 0, 0, 1}) == doctest::Approx(-423.0));
}

TEST_CASE("dollar VaR") {
  CHECK(to_cents(var_dollars(113147, 10)) == 11315);
  CHECK(var_dollars(0, 3118) == 0.0);
  const double d = var_dollars(RiskAllocation::one_hot(Bucket::high), BucketMarketModel::reference(), 0.01, 1e6);
  CHECK(std::abs(d - 311800) <= 300);
  CHECK_THROWS_AS(var_dollars(-1, 10), DomainError);
  CHECK(to_cents(-0.005) == -1);
}

TEST_CASE("VaR discrepancy examples") {
  const auto& m = BucketMarketModel::reference();
  const auto lm = RiskAllocation::one_hot(Bucket::low_medium);
  auto d = var_discrepancy(lm, RiskAllocation::one_hot(Bucket::low), m, 0.01);
  CHECK(std::abs(d.value_bps - -1114) <= 5);
  CHECK(d.classification == RiskClass::under_risked);
  d = var_discrepancy(lm, RiskAllocation::one_hot(Bucket::high), m, 0.01);
  CHECK(std::abs(d.value_bps - 2027) <= 5);
  CHECK(d.classification == RiskClass::over_risked);
  d = var_discrepancy(lm, lm, m, 0.01);
  CHECK(d.value_bps == 0.0);
  CHECK(d.classification == RiskClass::aligned);
  CHECK(to_string(RiskClass::under_risked) == "under-risked");
}

TEST_CASE("classification band") {
  CHECK(classify(-0.5, 0.0) == RiskClass::under_risked);
  CHECK(classify(0.0, 0.0) == RiskClass::aligned);
  CHECK(classify(-0.5, 1.0) == RiskClass::aligned);
  CHECK(classify(1.0, 1.0) == RiskClass::aligned);
  CHECK(classify(1.5, 1.0) == RiskClass::over_risked);
}

TEST_CASE("model fingerprint") {
  const ModelConfig a;
  ModelConfig b;
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.fingerprint().size() == 16);
  b.alpha = 0.05;
  CHECK(a.fingerprint() != b.fingerprint());
}
