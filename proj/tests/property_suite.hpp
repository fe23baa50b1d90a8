#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Randomized property checks shared by the doctest runner and the acceptance
// binary.
namespace kycvar::props {

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

inline constexpr std::size_t kDefaultCases = 200;

std::vector<SuiteResult> run_all(std::uint64_t seed, std::size_t cases = kDefaultCases);

}  // namespace kycvar::props
