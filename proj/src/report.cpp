#include "kycvar/report.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "kycvar/errors.hpp"
#include "kycvar/text.hpp"

namespace kycvar::report {

namespace {

Json number(double v, bool raw) {
  if (!std::isfinite(v)) return nullptr;
  if (raw) return v;
  const double r = std::round(v);
  return static_cast<long long>(r == 0.0 ? 0.0 : r);
}

std::string money(double v) { return std::isfinite(v) ? text::fixed(v, 2) : ""; }

class Writer {
 public:
  explicit Writer(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  template <typename F>
  void csv(const std::string& name, F&& body) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    body(out);
    written_.push_back(path);
  }

  void json(const std::string& name, const Json& doc) {
    csv(name, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
  }

  std::vector<std::filesystem::path> done() { return std::move(written_); }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
};

// mean, p05, p50, p95 for each measure, one row per (group, date, measure).
struct StatsTable {
  std::vector<Series> mean;
  std::vector<Series> quantiles;
};

StatsTable stats_table(const EvaluatedDataset& data, const Grouping& g,
                       std::optional<DateRange> range) {
  StatsTable t;
  for (auto m : {Measure::profile, Measure::portfolio, Measure::discrepancy}) {
    t.mean.push_back(group_timeseries(data, g, m, {Statistic::mean, {}}, range));
    t.quantiles.push_back(group_timeseries(data, g, m, {Statistic::quantiles, {0.05, 0.5, 0.95}}, range));
  }
  return t;
}

void write_stats_csv(const StatsTable& t, std::ostream& out, bool raw) {
  out << "group,date,count,measure,mean,p05,p50,p95\n";
  const std::size_t rows = t.mean.front().rows.size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t m = 0; m < t.mean.size(); ++m) {
      const auto& a = t.mean[m].rows[r];
      const auto& q = t.quantiles[m].rows[r];
      out << a.group << ',' << a.date.iso() << ',' << a.count << ',' << to_string(t.mean[m].measure)
          << ',' << bps(a.values[0], raw) << ',' << bps(q.values[0], raw) << ','
          << bps(q.values[1], raw) << ',' << bps(q.values[2], raw) << '\n';
    }
  }
}

Json stats_json(const StatsTable& t, bool raw) {
  Json arr = Json::array();
  for (std::size_t m = 0; m < t.mean.size(); ++m) {
    Json series = to_json(t.quantiles[m], raw);
    for (std::size_t r = 0; r < t.mean[m].rows.size(); ++r)
      series["rows"][r]["mean"] = number(t.mean[m].rows[r].values[0], raw);
    arr.push_back(std::move(series));
  }
  return arr;
}

}  // namespace

std::string bps(double value, bool raw) {
  if (!std::isfinite(value)) return "";
  return raw ? text::shortest(value) : text::rounded(value);
}

void write_summaries_csv(std::span<const WeightedSummary> rows, std::ostream& out, bool raw) {
  out << "grain_id,date,accounts,total_market_value,mean_market_value,profile_var_bps,"
         "portfolio_var_bps,discrepancy_bps\n";
  for (const auto& s : rows) {
    out << s.grain_id << ',' << s.date.iso() << ',' << s.accounts << ','
        << money(s.total_market_value) << ',' << money(s.mean_market_value) << ','
        << bps(s.profile_bps, raw) << ',' << bps(s.portfolio_bps, raw) << ','
        << bps(s.discrepancy_bps, raw) << '\n';
  }
}

void write_series_csv(const Series& series, std::ostream& out, bool raw) {
  out << series.grouping << ",date,count";
  for (const auto& c : series.columns) out << ',' << c;
  out << ",empty\n";
  for (const auto& r : series.rows) {
    out << r.group << ',' << r.date.iso() << ',' << r.count;
    for (double v : r.values) out << ',' << bps(v, raw);
    out << ',' << (r.empty() ? "1" : "0") << '\n';
  }
}

void write_histogram_csv(const Histogram1D& h, std::ostream& out) {
  out << "bin_lower,bin_upper,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    out << text::shortest(h.edges[i]) << ',' << text::shortest(h.edges[i + 1]) << ','
        << h.counts[i] << '\n';
}

void write_histogram2d_csv(const Histogram2D& h, std::ostream& out) {
  out << "profile_lower,profile_upper,portfolio_lower,portfolio_upper,count\n";
  for (std::size_t y = 0; y < h.counts.size(); ++y)
    for (std::size_t x = 0; x < h.counts[y].size(); ++x)
      if (h.counts[y][x])
        out << text::shortest(h.x_edges[x]) << ',' << text::shortest(h.x_edges[x + 1]) << ','
            << text::shortest(h.y_edges[y]) << ',' << text::shortest(h.y_edges[y + 1]) << ','
            << h.counts[y][x] << '\n';
}

void write_events_csv(const EventStudy& study, std::ostream& out, bool raw) {
  out << "event,account_id,event_date,before_date,after_date,market_value_before,"
         "market_value_after,profile_before_bps,profile_after_bps,portfolio_before_bps,"
         "portfolio_after_bps,delta_bps,truncated\n";
  for (const auto& e : study.events) {
    out << to_string(study.type) << ',' << e.account_id << ',' << e.event_date.iso() << ','
        << e.before_date.iso() << ',' << e.after_date.iso() << ',' << money(e.market_value_before)
        << ',' << money(e.market_value_after) << ',' << bps(e.profile_before_bps, raw) << ','
        << bps(e.profile_after_bps, raw) << ',' << bps(e.portfolio_before_bps, raw) << ','
        << bps(e.portfolio_after_bps, raw) << ',' << bps(e.delta_bps(), raw) << ','
        << (e.truncated ? 1 : 0) << '\n';
  }
}

void write_bootstrap_csv(std::span<const BootstrapCI> rows, std::ostream& out, bool raw) {
  out << "group,n,estimate,lower,upper,resamples,confidence,degenerate\n";
  for (const auto& c : rows) {
    out << c.group << ',' << c.n << ',' << bps(c.estimate, raw) << ',' << bps(c.lower, raw) << ','
        << bps(c.upper, raw) << ',' << c.resamples << ',' << text::shortest(c.confidence) << ','
        << (c.degenerate ? 1 : 0) << '\n';
  }
}

Json to_json(const WeightedSummary& s, bool raw) {
  return Json{{"grain_id", s.grain_id},
              {"date", s.date.iso()},
              {"accounts", s.accounts},
              {"total_market_value", s.total_market_value},
              {"mean_market_value", s.mean_market_value},
              {"profile_var_bps", number(s.profile_bps, raw)},
              {"portfolio_var_bps", number(s.portfolio_bps, raw)},
              {"discrepancy_bps", number(s.discrepancy_bps, raw)},
              {"defined", s.defined}};
}

Json to_json(const Series& series, bool raw) {
  Json j{{"grouping", series.grouping},
         {"measure", to_string(series.measure)},
         {"columns", series.columns},
         {"rows", Json::array()}};
  for (const auto& r : series.rows) {
    Json row{{"group", r.group}, {"date", r.date.iso()}, {"count", r.count}, {"empty", r.empty()}};
    for (std::size_t k = 0; k < r.values.size(); ++k) row[series.columns[k]] = number(r.values[k], raw);
    j["rows"].push_back(std::move(row));
  }
  return j;
}

Json to_json(const Histogram1D& h) { return Json{{"edges", h.edges}, {"counts", h.counts}}; }

Json to_json(const Histogram2D& h) {
  return Json{{"x_edges", h.x_edges}, {"y_edges", h.y_edges}, {"counts", h.counts}};
}

Json to_json(const EventStudy& study, bool raw) {
  Json j{{"event", to_string(study.type)}, {"events", Json::array()}};
  for (const auto& e : study.events) {
    j["events"].push_back(Json{{"account_id", e.account_id},
                               {"event_date", e.event_date.iso()},
                               {"before_date", e.before_date.iso()},
                               {"after_date", e.after_date.iso()},
                               {"market_value_before", e.market_value_before},
                               {"market_value_after", e.market_value_after},
                               {"profile_before_bps", number(e.profile_before_bps, raw)},
                               {"profile_after_bps", number(e.profile_after_bps, raw)},
                               {"portfolio_before_bps", number(e.portfolio_before_bps, raw)},
                               {"portfolio_after_bps", number(e.portfolio_after_bps, raw)},
                               {"delta_bps", number(e.delta_bps(), raw)},
                               {"truncated", e.truncated}});
  }
  return j;
}

Json to_json(const BootstrapCI& c, bool raw) {
  return Json{{"group", c.group},
              {"n", c.n},
              {"estimate", number(c.estimate, raw)},
              {"lower", number(c.lower, raw)},
              {"upper", number(c.upper, raw)},
              {"resamples", c.resamples},
              {"confidence", c.confidence},
              {"degenerate", c.degenerate}};
}

std::optional<Kind> parse_kind(std::string_view s) noexcept {
  for (auto k : {Kind::client, Kind::advisor, Kind::dealership, Kind::events, Kind::clusters})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::string_view to_string(Kind k) noexcept {
  switch (k) {
    case Kind::client: return "client";
    case Kind::advisor: return "advisor";
    case Kind::dealership: return "dealership";
    case Kind::events: return "events";
    case Kind::clusters: return "clusters";
  }
  return "dealership";
}

std::vector<std::filesystem::path> run(const EvaluatedDataset& data, const Options& o,
                                       const std::filesystem::path& out_dir) {
  std::vector<Date> dates;
  for (const auto& d : data.dates())
    if (!o.range || o.range->contains(d)) dates.push_back(d);
  if (dates.empty()) throw DomainError("date range selects no dataset dates", "date");
  const Date last = dates.back();

  Writer w(out_dir);
  Json doc{{"kind", to_string(o.kind)},
           {"model_fingerprint", data.config().fingerprint()},
           {"alpha", data.config().alpha},
           {"first_date", dates.front().iso()},
           {"last_date", last.iso()}};

  switch (o.kind) {
    case Kind::client: {
      const auto rows = grouped_summaries(data, Grouping::client(), o.range);
      w.csv("client_summary.csv", [&](std::ostream& out) { write_summaries_csv(rows, out, o.raw); });
      auto& arr = doc["clients"] = Json::array();
      for (const auto& r : rows) arr.push_back(to_json(r, o.raw));
      break;
    }
    case Kind::advisor: {
      const auto rows = grouped_summaries(data, Grouping::advisor(), o.range);
      w.csv("advisor_summary.csv", [&](std::ostream& out) { write_summaries_csv(rows, out, o.raw); });
      const auto stats = stats_table(data, Grouping::advisor(), o.range);
      w.csv("advisor_timeseries.csv", [&](std::ostream& out) { write_stats_csv(stats, out, o.raw); });
      auto& arr = doc["summaries"] = Json::array();
      for (const auto& r : rows) arr.push_back(to_json(r, o.raw));
      doc["timeseries"] = stats_json(stats, o.raw);
      break;
    }
    case Kind::dealership: {
      const auto rows = grouped_summaries(data, Grouping::dealership(), o.range);
      w.csv("dealership_summary.csv", [&](std::ostream& out) { write_summaries_csv(rows, out, o.raw); });
      const auto stats = stats_table(data, Grouping::dealership(), o.range);
      w.csv("dealership_timeseries.csv", [&](std::ostream& out) { write_stats_csv(stats, out, o.raw); });
      const auto advisory = stats_table(data, Grouping::advisory_type(), o.range);
      w.csv("dealership_advisory_type.csv",
            [&](std::ostream& out) { write_stats_csv(advisory, out, o.raw); });

      Json shares = Json::array();
      w.csv("dealership_under_risked.csv", [&](std::ostream& out) {
        out << "date,accounts,under_risked_share\n";
        for (const auto& d : dates) {
          const double share = under_risked_share(data, d, o.band_bps);
          out << d.iso() << ',' << data.rows_on(d).size() << ',' << text::fixed(share, 6) << '\n';
          shares.push_back(Json{{"date", d.iso()}, {"share", share}});
        }
      });
      Json hist;
      for (auto m : {Measure::profile, Measure::portfolio, Measure::discrepancy}) {
        const auto h = histogram(data, last, m, o.histogram_width);
        w.csv("dealership_hist_" + std::string(to_string(m)) + ".csv",
              [&](std::ostream& out) { write_histogram_csv(h, out); });
        hist[std::string(to_string(m))] = to_json(h);
      }
      const auto h2 = histogram2d(data, last, o.histogram_width);
      w.csv("dealership_hist2d.csv", [&](std::ostream& out) { write_histogram2d_csv(h2, out); });
      hist["portfolio_vs_profile"] = to_json(h2);

      auto& arr = doc["summaries"] = Json::array();
      for (const auto& r : rows) arr.push_back(to_json(r, o.raw));
      doc["timeseries"] = stats_json(stats, o.raw);
      doc["advisory_type"] = stats_json(advisory, o.raw);
      doc["under_risked_share"] = shares;
      doc["histograms"] = {{"date", last.iso()}, {"width_bps", o.histogram_width}, {"data", hist}};
      break;
    }
    case Kind::events: {
      const auto influx = cash_influx_study(data, o.influx_threshold);
      const auto after = kyc_change_study(data, o.kyc_window, Direction::after, o.kyc_min_change_bps);
      const auto before = kyc_change_study(data, o.kyc_window, Direction::before, o.kyc_min_change_bps);
      auto in_range = [&](const EventStudy& s) {
        EventStudy out{s.type, {}};
        for (const auto& e : s.events)
          if (!o.range || o.range->contains(e.event_date)) out.events.push_back(e);
        return out;
      };
      const auto a = in_range(influx), b = in_range(after), c = in_range(before);
      w.csv("events_cash_influx.csv", [&](std::ostream& out) { write_events_csv(a, out, o.raw); });
      w.csv("events_kyc_after.csv", [&](std::ostream& out) { write_events_csv(b, out, o.raw); });
      w.csv("events_kyc_before.csv", [&](std::ostream& out) { write_events_csv(c, out, o.raw); });
      doc["cash_influx"] = to_json(a, o.raw);
      doc["kyc_after"] = to_json(b, o.raw);
      doc["kyc_before"] = to_json(c, o.raw);
      doc["parameters"] = {{"influx_threshold", o.influx_threshold},
                           {"kyc_window", o.kyc_window},
                           {"kyc_min_change_bps", o.kyc_min_change_bps}};
      break;
    }
    case Kind::clusters: {
      const auto stats = stats_table(data, Grouping::cluster(), o.range);
      w.csv("clusters_timeseries.csv", [&](std::ostream& out) { write_stats_csv(stats, out, o.raw); });
      Json cis = Json::array();
      std::vector<BootstrapCI> all;
      for (auto m : {Measure::profile, Measure::portfolio, Measure::discrepancy}) {
        auto rows = bootstrap_group_means(data, Grouping::cluster(), m, last, o.resamples,
                                          o.confidence, o.seed);
        for (auto& r : rows) {
          r.group += ":" + std::string(to_string(m));
          cis.push_back(to_json(r, o.raw));
          all.push_back(std::move(r));
        }
      }
      w.csv("clusters_bootstrap.csv", [&](std::ostream& out) { write_bootstrap_csv(all, out, o.raw); });
      doc["timeseries"] = stats_json(stats, o.raw);
      doc["bootstrap"] = {{"date", last.iso()}, {"seed", o.seed}, {"intervals", cis}};
      break;
    }
  }
  w.json(std::string(to_string(o.kind)) + ".json", doc);
  return w.done();
}

}  // namespace kycvar::report
