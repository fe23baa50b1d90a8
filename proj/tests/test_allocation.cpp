#include <doctest.h>

#include <cmath>
#include <numeric>

#include "kycvar/allocation.hpp"
#include "kycvar/errors.hpp"
#include "kycvar/text.hpp"

using namespace kycvar;

TEST_CASE("allocation normalizes percents") {
  const RiskAllocation a(Vec5{20, 10, 70, 0, 0});
  const Vec5 want{0.2, 0.1, 0.7, 0, 0};
  for (std::size_t i = 0; i < kBuckets; ++i) CHECK(a[i] == doctest::Approx(want[i]).epsilon(1e-12));
  CHECK(std::accumulate(a.weights().begin(), a.weights().end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("allocation accepts fractions unchanged") {
  const RiskAllocation a(Vec5{0.2, 0.1, 0.7, 0, 0});
  CHECK(a[2] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(a == RiskAllocation(Vec5{20, 10, 70, 0, 0}));
}

TEST_CASE("allocation rejects bad input") {
  CHECK_THROWS_AS(RiskAllocation(Vec5{0.5, 0.5, 0.5, 0, 0}), SchemaError);
  CHECK_THROWS_AS(RiskAllocation(Vec5{-0.1, 0.6, 0.5, 0, 0}), SchemaError);
  CHECK_THROWS_AS(RiskAllocation(Vec5{0, 0, 0, 0, 0}), SchemaError);
  CHECK_THROWS_AS(RiskAllocation(Vec5{std::nan(""), 1, 0, 0, 0}), SchemaError);
  const std::vector<double> four{0.25, 0.25, 0.25, 0.25};
  CHECK_THROWS_AS(RiskAllocation(std::span<const double>(four)), SchemaError);
}

TEST_CASE("one-hot allocations") {
  const auto h = RiskAllocation::one_hot(Bucket::high);
  CHECK(h[4] == 1.0);
  CHECK(h[0] == 0.0);
  CHECK(h.percents()[4] == 100.0);
}

TEST_CASE("micro units sum to one million") {
  const RiskAllocation a(Vec5{1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 0});
  const auto u = to_micro_units(a.weights());
  CHECK(u[0] + u[1] + u[2] + u[3] + u[4] == 1000000);
  const auto q = quantize_micro(a);
  CHECK(quantize_micro(q) == q);
}

TEST_CASE("text helpers") {
  CHECK(text::rounded(3117.7) == "3118");
  CHECK(text::rounded(-21.5) == "-22");
  CHECK(text::rounded(2.5) == "3");
  CHECK(text::fixed(31.177, 2) == "31.18");
  CHECK(text::to_double(" 1.5 ") == 1.5);
  CHECK_THROWS_AS(text::to_double("1.5x", "f"), ParseError);
  CHECK_THROWS_AS(text::to_int("", "f"), ParseError);
  CHECK(text::to_doubles("20,10,70,0,0").size() == 5);
  CHECK(text::shortest(0.1) == "0.1");
  // FNV-1a reference vectors
  CHECK(text::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(text::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}
