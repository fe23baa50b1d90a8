#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kycvar/analytics.hpp"

// CSV and JSON serialization of analytics outputs, and the batch report
// driver behind `kycvar report`.
namespace kycvar::report {

using Json = nlohmann::ordered_json;

/// bps as an integer rounded half away from zero, or shortest round-trip
/// decimal when `raw`. Empty for NaN.
std::string bps(double value, bool raw);

void write_summaries_csv(std::span<const WeightedSummary> rows, std::ostream& out, bool raw);
void write_series_csv(const Series& series, std::ostream& out, bool raw);
void write_histogram_csv(const Histogram1D& h, std::ostream& out);
void write_histogram2d_csv(const Histogram2D& h, std::ostream& out);
void write_events_csv(const EventStudy& study, std::ostream& out, bool raw);
void write_bootstrap_csv(std::span<const BootstrapCI> rows, std::ostream& out, bool raw);

Json to_json(const WeightedSummary& s, bool raw);
Json to_json(const Series& series, bool raw);
Json to_json(const Histogram1D& h);
Json to_json(const Histogram2D& h);
Json to_json(const EventStudy& study, bool raw);
Json to_json(const BootstrapCI& ci, bool raw);

enum class Kind { client, advisor, dealership, events, clusters };

std::optional<Kind> parse_kind(std::string_view s) noexcept;
std::string_view to_string(Kind k) noexcept;

struct Options {
  Kind kind = Kind::dealership;
  std::optional<DateRange> range;
  bool raw = false;
  double histogram_width = 100.0;
  double band_bps = 0.0;
  double influx_threshold = 0.5;
  std::size_t kyc_window = kDefaultKycWindow;
  double kyc_min_change_bps = 1.0;
  std::size_t resamples = kDefaultResamples;
  double confidence = 0.95;
  std::uint64_t seed = 20190812;
};

/// Writes the report's CSV tables plus `<kind>.json` into `out_dir` (created
/// if missing) and returns the paths written. Throws DomainError when the
/// date range selects no dataset dates.
std::vector<std::filesystem::path> run(const EvaluatedDataset& data, const Options& options,
                                       const std::filesystem::path& out_dir);

}  // namespace kycvar::report
