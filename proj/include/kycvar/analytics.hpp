#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kycvar/dataset.hpp"
#include "kycvar/kernels.hpp"

namespace kycvar {

using kernels::AccountMeasure;

enum class Measure { profile, portfolio, discrepancy };

std::string_view to_string(Measure m) noexcept;
std::optional<Measure> parse_measure(std::string_view s) noexcept;
double value_of(const AccountMeasure& m, Measure which) noexcept;

enum class ExecPolicy { serial, parallel };

struct DateRange {
  Date first;
  Date last;
  bool contains(Date d) const noexcept { return first <= d && d <= last; }
};

/// A dataset with per-row VaR measures evaluated once under a model.
///
/// Rows are held in canonical (account_id, date) order regardless of input
/// order, which makes every downstream result independent of file row order.
class EvaluatedDataset {
 public:
  EvaluatedDataset(Dataset data, ModelConfig config, ExecPolicy policy = ExecPolicy::parallel);

  std::span<const AccountSnapshot> snapshots() const noexcept { return data_.snapshots; }
  std::span<const AccountMeasure> measures() const noexcept { return measures_; }
  std::span<const ClientRecord> clients() const noexcept { return data_.clients; }
  const std::vector<Date>& dates() const noexcept { return dates_; }
  const ModelConfig& config() const noexcept { return config_; }

  const ClientRecord* client(std::string_view id) const;
  /// Row indices on `date`, in canonical order. Empty if the date is absent.
  std::span<const std::size_t> rows_on(Date date) const;

 private:
  Dataset data_;
  ModelConfig config_;
  std::vector<AccountMeasure> measures_;
  std::vector<Date> dates_;
  std::map<Date, std::vector<std::size_t>> by_date_;
  std::unordered_map<std::string, std::size_t> client_index_;
};

// ---------------------------------------------------------------------------
// Weighted summaries

struct WeightedSummary {
  std::string grain_id;
  Date date;
  std::size_t accounts = 0;
  double total_market_value = 0.0;
  double mean_market_value = 0.0;  // unweighted
  // Market-value weighted means. Undefined (defined == false) when the total
  // market value is zero.
  double profile_bps = 0.0;
  double portfolio_bps = 0.0;
  double discrepancy_bps = 0.0;
  bool defined = false;
};

WeightedSummary weighted_summary(std::string grain_id, Date date,
                                 std::span<const AccountMeasure> accounts);

/// Summary of one client's accounts on one date. Throws DomainError when the
/// snapshots are empty or span several clients or dates.
WeightedSummary client_summary(std::span<const AccountSnapshot> snapshots,
                               const BucketMarketModel& model, double alpha);

// ---------------------------------------------------------------------------
// Groupings

using GroupKeyFn =
    std::function<std::optional<std::string>(const AccountSnapshot&, const ClientRecord*)>;

/// Maps a row to its group key; rows mapped to nullopt are excluded.
struct Grouping {
  std::string name;
  GroupKeyFn key;

  static Grouping client();
  static Grouping advisor();
  static Grouping dealership();
  static Grouping cluster();
  static Grouping advisory_type();
  static Grouping account_type();
  static Grouping gender();
  static Grouping retired();
  static Grouping knowledge();
  static Grouping marital_status();
  static Grouping residency();
  static Grouping age_band();  // decades: "18-29", "30-39", ... "80+"
  static Grouping custom(std::string name, GroupKeyFn key);
};

/// client, advisor, dealership, cluster, advisory_type, account_type, gender,
/// retired, knowledge, marital_status, residency, age_band.
std::optional<Grouping> parse_grouping(std::string_view name);

std::vector<WeightedSummary> grouped_summaries(const EvaluatedDataset& data,
                                               const Grouping& grouping,
                                               std::optional<DateRange> range = std::nullopt);

// ---------------------------------------------------------------------------
// Time series

enum class Statistic { mean, weighted_mean, median, quantiles };

struct StatisticSpec {
  Statistic kind = Statistic::mean;
  std::vector<double> probs = {0.05, 0.5, 0.95};  // quantiles only

  std::vector<std::string> columns() const;
};

struct SeriesRow {
  std::string group;
  Date date;
  std::size_t count = 0;
  std::vector<double> values;  // NaN when empty

  bool empty() const noexcept { return count == 0; }
};

struct Series {
  std::string grouping;
  Measure measure = Measure::profile;
  StatisticSpec statistic;
  std::vector<std::string> columns;
  std::vector<SeriesRow> rows;  // ordered by (group, date)
};

/// Linear interpolation between order statistics (R type 7). `sorted` must be
/// ascending and nonempty.
double quantile_type7(std::span<const double> sorted, double p);

/// One row per (group, date) for every group seen anywhere in the dataset and
/// every dataset date in range; a group with no rows on a date yields an empty
/// row rather than being dropped.
Series group_timeseries(const EvaluatedDataset& data, const Grouping& grouping, Measure measure,
                        const StatisticSpec& statistic,
                        std::optional<DateRange> range = std::nullopt);

// ---------------------------------------------------------------------------
// Histograms. Bins are half-open [edge, edge + width) anchored at `origin`.

struct Histogram1D {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  std::size_t total() const noexcept;
};

struct Histogram2D {
  std::vector<double> x_edges;  // profile
  std::vector<double> y_edges;  // portfolio
  std::vector<std::vector<std::size_t>> counts;  // [y][x]
  std::size_t total() const noexcept;
};

Histogram1D histogram(std::span<const double> values, double width, double origin = 0.0);
/// Both axes share one set of edges so the equal-VaR line is the diagonal.
Histogram2D histogram2d(std::span<const double> profile_bps, std::span<const double> portfolio_bps,
                        double width, double origin = 0.0);

Histogram1D histogram(const EvaluatedDataset& data, Date date, Measure measure, double width,
                      double origin = 0.0);
Histogram2D histogram2d(const EvaluatedDataset& data, Date date, double width,
                        double origin = 0.0);

/// Share of accounts on `date` with discrepancy <= -band. Throws DomainError
/// when no rows exist on that date.
double under_risked_share(const EvaluatedDataset& data, Date date, double band_bps = 0.0);

// ---------------------------------------------------------------------------
// Event studies

enum class EventType { cash_influx, kyc_change };
std::string_view to_string(EventType t) noexcept;

struct Event {
  std::string account_id;
  Date event_date;
  Date before_date;
  Date after_date;
  double market_value_before = 0.0;
  double market_value_after = 0.0;
  double profile_before_bps = 0.0;
  double profile_after_bps = 0.0;
  double portfolio_before_bps = 0.0;
  double portfolio_after_bps = 0.0;
  bool truncated = false;  // window ran past the account's first or last date

  double delta_bps() const noexcept { return portfolio_after_bps - portfolio_before_bps; }
};

struct EventStudy {
  EventType type = EventType::cash_influx;
  std::vector<Event> events;  // ordered by (account_id, event_date)
};

/// Event when market value on a date is at least (1 + threshold) times the
/// value on the account's previous available date. Before is the previous
/// date, after is the event date. Throws DomainError for threshold <= 0.
EventStudy cash_influx_study(const EvaluatedDataset& data, double threshold = 0.5);

enum class Direction { after, before };

inline constexpr std::size_t kDefaultKycWindow = 10;

/// Event on every date i where |profile VaR(i) - profile VaR(i-1)| >=
/// min_change_bps. Windows count the account's available dates:
///  - after:  portfolio VaR from date i-1 to date i+window
///  - before: portfolio VaR from date i-1-window to date i-1
/// Windows are clamped to the account's range and flagged truncated.
EventStudy kyc_change_study(const EvaluatedDataset& data, std::size_t window = kDefaultKycWindow,
                            Direction direction = Direction::after, double min_change_bps = 1.0);

// ---------------------------------------------------------------------------
// Bootstrap

struct BootstrapCI {
  std::string group;
  std::size_t n = 0;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t resamples = 0;
  double confidence = 0.95;
  bool degenerate = false;  // group of one value
};

inline constexpr std::size_t kDefaultResamples = 9999;

/// Percentile-method interval for the mean. Bounds are widened, if needed, to
/// contain the point estimate.
BootstrapCI bootstrap_mean_ci(std::span<const double> values, std::size_t resamples,
                              double confidence, std::uint64_t seed,
                              ExecPolicy policy = ExecPolicy::parallel);

/// One interval per group, on `date` or pooled over all dates when nullopt.
/// Each group's stream is seeded from (seed, group name).
std::vector<BootstrapCI> bootstrap_group_means(const EvaluatedDataset& data,
                                               const Grouping& grouping, Measure measure,
                                               std::optional<Date> date,
                                               std::size_t resamples = kDefaultResamples,
                                               double confidence = 0.95,
                                               std::uint64_t seed = 20190812);

}  // namespace kycvar
