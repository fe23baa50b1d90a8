#include "kycvar/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "kycvar/errors.hpp"
#include "kycvar/text.hpp"

namespace kycvar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Contiguous [begin, end) row ranges of each account in canonical order.
std::vector<std::pair<std::size_t, std::size_t>> account_runs(const EvaluatedDataset& data) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  const auto rows = data.snapshots();
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= rows.size(); ++i) {
    if (i == rows.size() || rows[i].account_id != rows[begin].account_id) {
      if (begin < i) runs.emplace_back(begin, i);
      begin = i;
    }
  }
  return runs;
}

Event make_event(const EvaluatedDataset& data, std::size_t event_row, std::size_t before_row,
                 std::size_t after_row, bool truncated) {
  const auto rows = data.snapshots();
  const auto m = data.measures();
  Event e;
  e.account_id = rows[event_row].account_id;
  e.event_date = rows[event_row].date;
  e.before_date = rows[before_row].date;
  e.after_date = rows[after_row].date;
  e.market_value_before = m[before_row].market_value;
  e.market_value_after = m[after_row].market_value;
  e.profile_before_bps = m[before_row].profile_bps;
  e.profile_after_bps = m[after_row].profile_bps;
  e.portfolio_before_bps = m[before_row].portfolio_bps;
  e.portfolio_after_bps = m[after_row].portfolio_bps;
  e.truncated = truncated;
  return e;
}

std::string age_band_of(int age) {
  if (age >= 80) return "80+";
  if (age < 30) return "18-29";
  const int lo = age / 10 * 10;
  return std::to_string(lo) + "-" + std::to_string(lo + 9);
}

template <typename F>
Grouping client_field(std::string name, F field) {
  return {std::move(name),
          [field](const AccountSnapshot&, const ClientRecord* c) -> std::optional<std::string> {
            if (!c) return std::nullopt;
            return field(*c);
          }};
}

}  // namespace

std::string_view to_string(Measure m) noexcept {
  switch (m) {
    case Measure::profile: return "profile";
    case Measure::portfolio: return "portfolio";
    case Measure::discrepancy: return "discrepancy";
  }
  return "profile";
}

std::optional<Measure> parse_measure(std::string_view s) noexcept {
  for (auto m : {Measure::profile, Measure::portfolio, Measure::discrepancy})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

double value_of(const AccountMeasure& m, Measure which) noexcept {
  switch (which) {
    case Measure::profile: return m.profile_bps;
    case Measure::portfolio: return m.portfolio_bps;
    case Measure::discrepancy: return m.discrepancy_bps();
  }
  return 0.0;
}

EvaluatedDataset::EvaluatedDataset(Dataset data, ModelConfig config, ExecPolicy policy)
    : data_(std::move(data)), config_(std::move(config)) {
  std::stable_sort(data_.snapshots.begin(), data_.snapshots.end(),
                   [](const AccountSnapshot& a, const AccountSnapshot& b) {
                     if (a.account_id != b.account_id) return a.account_id < b.account_id;
                     return a.date < b.date;
                   });
  const VarEvaluator eval(config_.model, config_.alpha);
  measures_ = policy == ExecPolicy::parallel ? kernels::evaluate_parallel(data_.snapshots, eval)
                                             : kernels::evaluate_serial(data_.snapshots, eval);
  for (std::size_t i = 0; i < data_.snapshots.size(); ++i)
    by_date_[data_.snapshots[i].date].push_back(i);
  for (const auto& [d, _] : by_date_) dates_.push_back(d);
  for (std::size_t i = 0; i < data_.clients.size(); ++i)
    client_index_.emplace(data_.clients[i].client_id, i);
}

const ClientRecord* EvaluatedDataset::client(std::string_view id) const {
  const auto it = client_index_.find(std::string(id));
  return it == client_index_.end() ? nullptr : &data_.clients[it->second];
}

std::span<const std::size_t> EvaluatedDataset::rows_on(Date date) const {
  const auto it = by_date_.find(date);
  if (it == by_date_.end()) return {};
  return it->second;
}

// ---------------------------------------------------------------------------

WeightedSummary weighted_summary(std::string grain_id, Date date,
                                 std::span<const AccountMeasure> accounts) {
  WeightedSummary s;
  s.grain_id = std::move(grain_id);
  s.date = date;
  s.accounts = accounts.size();
  if (accounts.empty()) {
    s.profile_bps = s.portfolio_bps = s.discrepancy_bps = kNaN;
    return s;
  }
  double total = 0.0, prof = 0.0, port = 0.0, disc = 0.0;
  for (const auto& a : accounts) {
    total += a.market_value;
    prof += a.market_value * a.profile_bps;
    port += a.market_value * a.portfolio_bps;
    disc += a.market_value * a.discrepancy_bps();
  }
  s.total_market_value = total;
  s.mean_market_value = total / static_cast<double>(accounts.size());
  if (total > 0.0) {
    s.profile_bps = prof / total;
    s.portfolio_bps = port / total;
    s.discrepancy_bps = disc / total;
    s.defined = true;
  } else {
    s.profile_bps = s.portfolio_bps = s.discrepancy_bps = kNaN;
  }
  return s;
}

WeightedSummary client_summary(std::span<const AccountSnapshot> snapshots,
                               const BucketMarketModel& model, double alpha) {
  if (snapshots.empty()) throw DomainError("client summary needs at least one snapshot");
  for (const auto& s : snapshots) {
    if (s.client_id != snapshots.front().client_id || s.date != snapshots.front().date) {
      throw DomainError("client summary snapshots must share one client and date");
    }
  }
  const auto measures = kernels::evaluate_serial(snapshots, VarEvaluator(model, alpha));
  return weighted_summary(snapshots.front().client_id, snapshots.front().date, measures);
}

// ---------------------------------------------------------------------------

Grouping Grouping::client() {
  return {"client", [](const AccountSnapshot& s, const ClientRecord*) {
            return std::optional<std::string>(s.client_id);
          }};
}

Grouping Grouping::advisor() {
  return {"advisor", [](const AccountSnapshot& s, const ClientRecord*) {
            return std::optional<std::string>(s.advisor_id);
          }};
}

Grouping Grouping::dealership() {
  return {"dealership", [](const AccountSnapshot&, const ClientRecord*) {
            return std::optional<std::string>("dealership");
          }};
}

Grouping Grouping::cluster() {
  return {"cluster",
          [](const AccountSnapshot&, const ClientRecord* c) -> std::optional<std::string> {
            if (!c || !c->cluster_label) return std::nullopt;
            return std::to_string(*c->cluster_label);
          }};
}

Grouping Grouping::advisory_type() {
  return {"advisory_type", [](const AccountSnapshot& s, const ClientRecord*) {
            return std::optional<std::string>(to_string(s.advisory_type));
          }};
}

Grouping Grouping::account_type() {
  return {"account_type", [](const AccountSnapshot& s, const ClientRecord*) {
            return std::optional<std::string>(to_string(s.account_type));
          }};
}

Grouping Grouping::gender() {
  return client_field("gender", [](const ClientRecord& c) { return std::string(to_string(c.gender)); });
}

Grouping Grouping::retired() {
  return client_field("retired", [](const ClientRecord& c) { return std::string(to_string(c.retired)); });
}

Grouping Grouping::knowledge() {
  return client_field("knowledge",
                      [](const ClientRecord& c) { return std::to_string(c.investment_knowledge); });
}

Grouping Grouping::marital_status() {
  return client_field("marital_status",
                      [](const ClientRecord& c) { return std::string(to_string(c.marital_status)); });
}

Grouping Grouping::residency() {
  return client_field("residency", [](const ClientRecord& c) { return c.residency; });
}

Grouping Grouping::age_band() {
  return client_field("age_band", [](const ClientRecord& c) { return age_band_of(c.age); });
}

Grouping Grouping::custom(std::string name, GroupKeyFn key) { return {std::move(name), std::move(key)}; }

std::optional<Grouping> parse_grouping(std::string_view name) {
  for (auto make : {&Grouping::client, &Grouping::advisor, &Grouping::dealership,
                    &Grouping::cluster, &Grouping::advisory_type, &Grouping::account_type,
                    &Grouping::gender, &Grouping::retired, &Grouping::knowledge,
                    &Grouping::marital_status, &Grouping::residency, &Grouping::age_band}) {
    auto g = make();
    if (g.name == name) return g;
  }
  return std::nullopt;
}

namespace {

// group -> date -> row indices, plus the set of all group keys.
struct GroupIndex {
  std::map<std::string, std::map<Date, std::vector<std::size_t>>> rows;
};

GroupIndex index_groups(const EvaluatedDataset& data, const Grouping& grouping,
                        std::optional<DateRange> range) {
  GroupIndex idx;
  const auto rows = data.snapshots();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto key = grouping.key(rows[i], data.client(rows[i].client_id));
    if (!key) continue;
    auto& per_date = idx.rows[*key];
    if (range && !range->contains(rows[i].date)) continue;
    per_date[rows[i].date].push_back(i);
  }
  return idx;
}

std::vector<Date> dates_in(const EvaluatedDataset& data, std::optional<DateRange> range) {
  std::vector<Date> out;
  for (const auto& d : data.dates())
    if (!range || range->contains(d)) out.push_back(d);
  return out;
}

}  // namespace

std::vector<WeightedSummary> grouped_summaries(const EvaluatedDataset& data,
                                               const Grouping& grouping,
                                               std::optional<DateRange> range) {
  const auto idx = index_groups(data, grouping, range);
  std::vector<WeightedSummary> out;
  std::vector<AccountMeasure> buf;
  for (const auto& [group, per_date] : idx.rows) {
    for (const auto& [date, rows] : per_date) {
      buf.clear();
      for (auto i : rows) buf.push_back(data.measures()[i]);
      out.push_back(weighted_summary(group, date, buf));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::string> StatisticSpec::columns() const {
  switch (kind) {
    case Statistic::mean: return {"mean"};
    case Statistic::weighted_mean: return {"weighted_mean"};
    case Statistic::median: return {"median"};
    case Statistic::quantiles: {
      std::vector<std::string> cols;
      for (double p : probs) {
        const auto pct = static_cast<int>(std::lround(p * 100.0));
        cols.push_back((pct < 10 ? "p0" : "p") + std::to_string(pct));
      }
      return cols;
    }
  }
  return {};
}

double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile probability outside [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

Series group_timeseries(const EvaluatedDataset& data, const Grouping& grouping, Measure measure,
                        const StatisticSpec& statistic, std::optional<DateRange> range) {
  Series series;
  series.grouping = grouping.name;
  series.measure = measure;
  series.statistic = statistic;
  series.columns = statistic.columns();

  const auto idx = index_groups(data, grouping, range);
  const auto dates = dates_in(data, range);
  const auto measures = data.measures();
  std::vector<double> values;

  for (const auto& [group, per_date] : idx.rows) {
    for (const auto& date : dates) {
      SeriesRow row{group, date, 0, std::vector<double>(series.columns.size(), kNaN)};
      const auto it = per_date.find(date);
      if (it != per_date.end() && !it->second.empty()) {
        const auto& rows = it->second;
        row.count = rows.size();
        values.clear();
        for (auto i : rows) values.push_back(value_of(measures[i], measure));
        switch (statistic.kind) {
          case Statistic::mean:
            row.values[0] = std::accumulate(values.begin(), values.end(), 0.0) /
                            static_cast<double>(values.size());
            break;
          case Statistic::weighted_mean: {
            double total = 0.0, acc = 0.0;
            for (auto i : rows) {
              total += measures[i].market_value;
              acc += measures[i].market_value * value_of(measures[i], measure);
            }
            row.values[0] = total > 0.0 ? acc / total : kNaN;
            break;
          }
          case Statistic::median:
            std::sort(values.begin(), values.end());
            row.values[0] = quantile_type7(values, 0.5);
            break;
          case Statistic::quantiles:
            std::sort(values.begin(), values.end());
            for (std::size_t k = 0; k < statistic.probs.size(); ++k)
              row.values[k] = quantile_type7(values, statistic.probs[k]);
            break;
        }
      }
      series.rows.push_back(std::move(row));
    }
  }
  return series;
}

// ---------------------------------------------------------------------------

std::size_t Histogram1D::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::size_t Histogram2D::total() const noexcept {
  std::size_t n = 0;
  for (const auto& row : counts) n += std::accumulate(row.begin(), row.end(), std::size_t{0});
  return n;
}

namespace {

long long bin_of(double v, double width, double origin) {
  return static_cast<long long>(std::floor((v - origin) / width));
}

std::vector<double> edges_for(long long lo, long long hi, double width, double origin) {
  std::vector<double> edges;
  for (long long k = lo; k <= hi + 1; ++k) edges.push_back(origin + static_cast<double>(k) * width);
  return edges;
}

void check_width(double width) {
  if (!(width > 0.0) || !std::isfinite(width)) throw DomainError("bin width must be positive", "width");
}

}  // namespace

Histogram1D histogram(std::span<const double> values, double width, double origin) {
  check_width(width);
  Histogram1D h;
  if (values.empty()) return h;
  long long lo = std::numeric_limits<long long>::max();
  long long hi = std::numeric_limits<long long>::min();
  for (double v : values) {
    const auto b = bin_of(v, width, origin);
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  h.edges = edges_for(lo, hi, width, origin);
  h.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
  for (double v : values) ++h.counts[static_cast<std::size_t>(bin_of(v, width, origin) - lo)];
  return h;
}

Histogram2D histogram2d(std::span<const double> profile_bps, std::span<const double> portfolio_bps,
                        double width, double origin) {
  check_width(width);
  if (profile_bps.size() != portfolio_bps.size())
    throw DomainError("histogram2d needs paired observations");
  Histogram2D h;
  if (profile_bps.empty()) return h;
  long long lo = std::numeric_limits<long long>::max();
  long long hi = std::numeric_limits<long long>::min();
  for (auto values : {profile_bps, portfolio_bps}) {
    for (double v : values) {
      const auto b = bin_of(v, width, origin);
      lo = std::min(lo, b);
      hi = std::max(hi, b);
    }
  }
  h.x_edges = edges_for(lo, hi, width, origin);
  h.y_edges = h.x_edges;
  const auto bins = static_cast<std::size_t>(hi - lo + 1);
  h.counts.assign(bins, std::vector<std::size_t>(bins, 0));
  for (std::size_t i = 0; i < profile_bps.size(); ++i) {
    const auto x = static_cast<std::size_t>(bin_of(profile_bps[i], width, origin) - lo);
    const auto y = static_cast<std::size_t>(bin_of(portfolio_bps[i], width, origin) - lo);
    ++h.counts[y][x];
  }
  return h;
}

Histogram1D histogram(const EvaluatedDataset& data, Date date, Measure measure, double width,
                      double origin) {
  std::vector<double> values;
  for (auto i : data.rows_on(date)) values.push_back(value_of(data.measures()[i], measure));
  return histogram(values, width, origin);
}

Histogram2D histogram2d(const EvaluatedDataset& data, Date date, double width, double origin) {
  std::vector<double> x, y;
  for (auto i : data.rows_on(date)) {
    x.push_back(data.measures()[i].profile_bps);
    y.push_back(data.measures()[i].portfolio_bps);
  }
  return histogram2d(x, y, width, origin);
}

double under_risked_share(const EvaluatedDataset& data, Date date, double band_bps) {
  const auto rows = data.rows_on(date);
  if (rows.empty()) throw DomainError("no accounts on " + date.iso(), "date");
  std::size_t under = 0;
  for (auto i : rows)
    if (data.measures()[i].discrepancy_bps() <= -band_bps) ++under;
  return static_cast<double>(under) / static_cast<double>(rows.size());
}

// ---------------------------------------------------------------------------

std::string_view to_string(EventType t) noexcept {
  return t == EventType::cash_influx ? "cash_influx" : "kyc_change";
}

EventStudy cash_influx_study(const EvaluatedDataset& data, double threshold) {
  if (!(threshold > 0.0)) throw DomainError("influx threshold must be positive", "threshold");
  EventStudy study{EventType::cash_influx, {}};
  const auto m = data.measures();
  for (const auto& [begin, end] : account_runs(data)) {
    for (std::size_t i = begin + 1; i < end; ++i) {
      const double prev = m[i - 1].market_value;
      if (prev > 0.0 && m[i].market_value >= (1.0 + threshold) * prev) {
        study.events.push_back(make_event(data, i, i - 1, i, false));
      }
    }
  }
  return study;
}

EventStudy kyc_change_study(const EvaluatedDataset& data, std::size_t window, Direction direction,
                            double min_change_bps) {
  if (window < 1) throw DomainError("window must be at least one date", "window");
  EventStudy study{EventType::kyc_change, {}};
  const auto m = data.measures();
  for (const auto& [begin, end] : account_runs(data)) {
    for (std::size_t i = begin + 1; i < end; ++i) {
      if (std::abs(m[i].profile_bps - m[i - 1].profile_bps) < min_change_bps) continue;
      const std::size_t pre = i - 1;
      if (direction == Direction::after) {
        const std::size_t want = i + window;
        const bool truncated = want >= end;
        study.events.push_back(make_event(data, i, pre, truncated ? end - 1 : want, truncated));
      } else {
        const bool truncated = pre - begin < window;
        study.events.push_back(make_event(data, i, truncated ? begin : pre - window, pre, truncated));
      }
    }
  }
  return study;
}

// ---------------------------------------------------------------------------

BootstrapCI bootstrap_mean_ci(std::span<const double> values, std::size_t resamples,
                              double confidence, std::uint64_t seed, ExecPolicy policy) {
  if (values.empty()) throw DomainError("bootstrap of an empty group");
  if (resamples < 1) throw DomainError("bootstrap needs at least one resample", "resamples");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw DomainError("confidence must lie in (0, 1)", "confidence");

  BootstrapCI ci;
  ci.n = values.size();
  ci.resamples = resamples;
  ci.confidence = confidence;
  ci.estimate = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() == 1) {
    ci.lower = ci.upper = ci.estimate;
    ci.degenerate = true;
    return ci;
  }
  auto means = policy == ExecPolicy::parallel
                   ? kernels::bootstrap_means_parallel(values, resamples, seed)
                   : kernels::bootstrap_means_serial(values, resamples, seed);
  std::sort(means.begin(), means.end());
  const double tail = (1.0 - confidence) / 2.0;
  ci.lower = std::min(quantile_type7(means, tail), ci.estimate);
  ci.upper = std::max(quantile_type7(means, 1.0 - tail), ci.estimate);
  return ci;
}

std::vector<BootstrapCI> bootstrap_group_means(const EvaluatedDataset& data,
                                               const Grouping& grouping, Measure measure,
                                               std::optional<Date> date, std::size_t resamples,
                                               double confidence, std::uint64_t seed) {
  std::optional<DateRange> range;
  if (date) range = DateRange{*date, *date};
  const auto idx = index_groups(data, grouping, range);
  std::vector<BootstrapCI> out;
  std::vector<double> values;
  for (const auto& [group, per_date] : idx.rows) {
    values.clear();
    for (const auto& [_, rows] : per_date)
      for (auto i : rows) values.push_back(value_of(data.measures()[i], measure));
    if (values.empty()) continue;
    auto ci = bootstrap_mean_ci(values, resamples, confidence, seed ^ text::fnv1a64(group));
    ci.group = group;
    out.push_back(std::move(ci));
  }
  return out;
}

}  // namespace kycvar
