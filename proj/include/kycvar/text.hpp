#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Locale-independent number formatting and small string helpers.
namespace kycvar::text {

std::string fixed(double value, int decimals);
std::string shortest(double value);

/// Rounds half away from zero and prints as an integer.
std::string rounded(double value);

/// Throws ParseError naming `field` on malformed input or trailing characters.
double to_double(std::string_view token, std::string_view field = {});
long long to_int(std::string_view token, std::string_view field = {});

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

/// Comma separated list of decimals, e.g. "20,10,70,0,0".
std::vector<double> to_doubles(std::string_view list, std::string_view field = {});

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace kycvar::text
