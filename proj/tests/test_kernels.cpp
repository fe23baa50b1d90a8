#include <doctest.h>
#include <omp.h>

#include <random>
#include <set>

#include "kycvar/kernels.hpp"
#include "kycvar/synth.hpp"

using namespace kycvar;

namespace {

struct Threads {
  explicit Threads(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
  int saved;
};

}  // namespace

TEST_CASE("parallel evaluation matches the serial reference bit for bit") {
  Threads t(4);
  SynthSpec spec;
  spec.accounts = 300;
  spec.dates = 4;
  const auto data = generate_synthetic(spec, ModelConfig{}, 3);
  const VarEvaluator eval(BucketMarketModel::reference(), 0.01);
  const auto s = kernels::evaluate_serial(data.snapshots, eval);
  const auto p = kernels::evaluate_parallel(data.snapshots, eval);
  REQUIRE(s.size() == data.snapshots.size());
  REQUIRE(p.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].profile_bps == p[i].profile_bps);
    CHECK(s[i].portfolio_bps == p[i].portfolio_bps);
    CHECK(s[i].market_value == p[i].market_value);
  }
  CHECK(kernels::evaluate_parallel({}, eval).empty());
}

TEST_CASE("parallel bootstrap matches the serial reference") {
  Threads t(3);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(0, 1);
  std::vector<double> x(257);
  for (auto& v : x) v = nd(rng);
  const auto s = kernels::bootstrap_means_serial(x, 1001, 77);
  const auto p = kernels::bootstrap_means_parallel(x, 1001, 77);
  CHECK(s == p);
  CHECK(s.size() == 1001);
  CHECK(kernels::bootstrap_means_serial(x, 1001, 78) != s);
}

TEST_CASE("resample seeds are distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t b = 0; b < 10000; ++b) seen.insert(kernels::resample_seed(20190812, b));
  CHECK(seen.size() == 10000);
  CHECK(kernels::resample_seed(1, 0) != kernels::resample_seed(2, 0));
}
