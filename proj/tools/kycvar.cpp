// kycvar: command line front end for the elicited-vs-revealed risk engine.

#include <httplib.h>

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <memory>

#include "kycvar/analytics.hpp"
#include "kycvar/errors.hpp"
#include "kycvar/metrics.hpp"
#include "kycvar/report.hpp"
#include "kycvar/service.hpp"
#include "kycvar/synth.hpp"
#include "kycvar/text.hpp"
#include "kycvar/var.hpp"

namespace {

using namespace kycvar;
namespace fs = std::filesystem;

constexpr int kExitInvalid = 2;

std::optional<fs::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

RiskAllocation parse_alloc(const std::string& s, const std::string& field) {
  try {
    return RiskAllocation(text::to_doubles(s, field));
  } catch (const Error& e) {
    throw SchemaError(field + ": " + e.what(), field);
  }
}

service::Json whatif_request(const std::string& profile, const std::vector<std::string>& cands,
                             std::optional<double> market_value, std::optional<double> alpha) {
  service::Json req{{"profile", text::to_doubles(profile, "profile")},
                    {"candidates", service::Json::array()}};
  for (const auto& c : cands) req["candidates"].push_back(text::to_doubles(c, "candidate"));
  if (market_value) req["market_value"] = *market_value;
  if (alpha) req["alpha"] = *alpha;
  return req;
}

Dataset load_dataset(const std::string& snapshots, const std::string& clients, bool lenient) {
  Dataset data;
  auto parsed = parse_snapshots(fs::path(snapshots), lenient ? Strictness::lenient : Strictness::strict);
  if (parsed.manifest.rows_rejected > 0) {
    std::cerr << "skipped " << parsed.manifest.rows_rejected << " invalid rows\n";
  }
  data.snapshots = std::move(parsed.snapshots);
  if (!clients.empty()) data.clients = parse_clients(fs::path(clients));
  return data;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elicited vs revealed risk: parametric VaR discrepancy engine"};
  app.require_subcommand(1);

  std::string model_path;
  std::optional<double> alpha;
  app.add_option("--model", model_path, "Model config file (default: $KYCVAR_MODEL or built-in)");
  app.add_option("--alpha", alpha, "Tail probability, overrides the model file");

  // var
  auto* var_cmd = app.add_subcommand("var", "VaR of one allocation");
  std::string alloc_text;
  std::optional<double> market_value;
  bool raw = false;
  var_cmd->add_option("--alloc", alloc_text, "Five weights, fractions or percents")->required();
  var_cmd->add_option("--market-value", market_value, "Account market value in CAD");
  var_cmd->add_flag("--raw", raw, "Full precision bps");

  // whatif
  auto* whatif_cmd = app.add_subcommand("whatif", "Compare candidate portfolios to a profile (JSON out)");
  std::string profile_text;
  std::vector<std::string> candidate_texts;
  whatif_cmd->add_option("--profile", profile_text, "Profile allocation")->required();
  whatif_cmd->add_option("--candidate", candidate_texts, "Candidate allocation (repeatable)")->required();
  whatif_cmd->add_option("--market-value", market_value, "Market value in CAD");

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "Allocation discrepancy metrics and pathology flags");
  std::string metric_id;
  std::string penalty_text;
  std::string scale_text = "percent";
  double epsilon = kDefaultKlEpsilon;
  metrics_cmd->add_option("--profile", profile_text, "Profile allocation")->required();
  metrics_cmd->add_option("--candidate", candidate_texts, "Candidate allocation (repeatable)")->required();
  metrics_cmd->add_option("--metric", metric_id, "One metric id; omit for the full comparison report");
  metrics_cmd->add_option("--penalty", penalty_text, "25 comma separated values for quad:custom");
  metrics_cmd->add_option("--scale", scale_text, "percent or fraction")->check(CLI::IsMember({"percent", "fraction"}));
  metrics_cmd->add_option("--epsilon", epsilon, "KL smoothing mass");

  // report
  auto* report_cmd = app.add_subcommand("report", "Batch analytics report");
  std::string snapshots_path, clients_path, out_dir, kind_text = "dealership";
  std::string date_text, from_text, to_text;
  bool lenient = false;
  report::Options ropt;
  report_cmd->add_option("--snapshots", snapshots_path, "Snapshot CSV")->required();
  report_cmd->add_option("--clients", clients_path, "Client CSV");
  report_cmd->add_option("--kind", kind_text, "client|advisor|dealership|events|clusters")
      ->check(CLI::IsMember({"client", "advisor", "dealership", "events", "clusters"}));
  report_cmd->add_option("--date", date_text, "Single date (YYYY-MM-DD)");
  report_cmd->add_option("--from", from_text, "First date");
  report_cmd->add_option("--to", to_text, "Last date");
  report_cmd->add_option("--out", out_dir, "Output directory")->required();
  report_cmd->add_flag("--raw", ropt.raw, "Full precision bps");
  report_cmd->add_flag("--lenient", lenient, "Skip invalid rows instead of failing");
  report_cmd->add_option("--width", ropt.histogram_width, "Histogram bin width in bps");
  report_cmd->add_option("--band", ropt.band_bps, "Alignment half-width in bps");
  report_cmd->add_option("--threshold", ropt.influx_threshold, "Cash influx threshold fraction");
  report_cmd->add_option("--window", ropt.kyc_window, "KYC change window in dates");
  report_cmd->add_option("--min-change", ropt.kyc_min_change_bps, "Minimum profile VaR change in bps");
  report_cmd->add_option("--resamples", ropt.resamples, "Bootstrap resamples");
  report_cmd->add_option("--confidence", ropt.confidence, "Bootstrap confidence level");
  report_cmd->add_option("--seed", ropt.seed, "Bootstrap seed");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dealership dataset");
  SynthSpec spec;
  std::uint64_t seed = 1;
  double anchor_bps = 1216.0;
  bool no_anchor = false;
  std::string start_text = spec.start.iso();
  synth_cmd->add_option("--accounts", spec.accounts, "Number of accounts");
  synth_cmd->add_option("--advisors", spec.advisors, "Number of advisors");
  synth_cmd->add_option("--dates", spec.dates, "Number of weekday dates");
  synth_cmd->add_option("--start", start_text, "First date");
  synth_cmd->add_option("--seed", seed, "Random seed");
  synth_cmd->add_option("--under-share", spec.under_risked_share, "Target under-risked share");
  synth_cmd->add_option("--medium-share", spec.medium_profile_share, "Share of one-hot Medium profiles");
  synth_cmd->add_option("--drift-min", spec.drift_min, "Minimum shifted fraction");
  synth_cmd->add_option("--drift-max", spec.drift_max, "Maximum shifted fraction");
  synth_cmd->add_option("--influx-rate", spec.influx_rate, "Deposit probability per account-date");
  synth_cmd->add_option("--rebalance-rate", spec.rebalance_rate, "Rebalance probability per account-date");
  synth_cmd->add_option("--kyc-change-rate", spec.kyc_change_rate, "Share of accounts with a profile change");
  synth_cmd->add_option("--anchor-bps", anchor_bps, "VaR pinned on the one-hot Medium profile");
  synth_cmd->add_flag("--no-anchor", no_anchor, "Use the model unchanged");
  synth_cmd->add_option("--out", out_dir, "Output directory")->required();

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the JSON what-if service");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve_cmd->add_option("--port", port, "Port");
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--snapshots", snapshots_path, "Snapshot CSV enabling /report routes");
  serve_cmd->add_option("--clients", clients_path, "Client CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    auto config = load_model_or_default(optional_path(model_path));
    if (alpha) {
      if (!(*alpha > 0.0 && *alpha <= 0.5)) throw DomainError("alpha must lie in (0, 0.5]", "alpha");
      config.alpha = *alpha;
    }

    if (*var_cmd) {
      const auto alloc = parse_alloc(alloc_text, "alloc");
      const auto quote = value_at_risk(alloc, config.model, config.alpha);
      std::cout << report::bps(quote.value_bps, raw) << " bps ("
                << text::fixed(quote.value_bps / 100.0, 2) << "%)\n";
      if (market_value) {
        std::cout << "dollar VaR " << text::fixed(var_dollars(*market_value, quote.value_bps), 2)
                  << " CAD\n";
      }
      return 0;
    }

    if (*whatif_cmd) {
      const service::State state{config, nullptr};
      const auto r = service::whatif(state, whatif_request(profile_text, candidate_texts, market_value, std::nullopt));
      std::cout << r.body.dump(2) << '\n';
      return r.status == 200 ? 0 : kExitInvalid;
    }

    if (*metrics_cmd) {
      const service::State state{config, nullptr};
      if (!metric_id.empty()) {
        auto req = whatif_request(profile_text, candidate_texts, std::nullopt, std::nullopt);
        req["metric"] = metric_id;
        req["scale"] = scale_text;
        req["epsilon"] = epsilon;
        if (!penalty_text.empty()) req["penalty"] = text::to_doubles(penalty_text, "penalty");
        const auto r = service::metrics(state, req);
        std::cout << r.body.dump(2) << '\n';
        return r.status == 200 ? 0 : kExitInvalid;
      }
      const auto profile = parse_alloc(profile_text, "profile");
      std::vector<RiskAllocation> cands;
      for (const auto& c : candidate_texts) cands.push_back(parse_alloc(c, "candidate"));
      MetricOptions options;
      options.alpha = config.alpha;
      options.kl_epsilon = epsilon;
      options.scale = scale_text == "fraction" ? Scale::fraction : Scale::percent;
      const auto rep = pathology_report(profile, cands, config.model, options);
      std::cout << "candidate,var_discrepancy_bps";
      for (const auto& id : rep.metric_ids) std::cout << ',' << id;
      std::cout << '\n';
      for (std::size_t i = 0; i < cands.size(); ++i) {
        std::cout << i << ',' << text::rounded(rep.var_discrepancy_bps[i]);
        for (double v : rep.values[i]) std::cout << ',' << text::shortest(v);
        std::cout << '\n';
      }
      for (const auto& f : rep.flags)
        std::cout << "flag " << to_string(f.type) << " [" << f.metric_id << "] " << f.message << '\n';
      return 0;
    }

    if (*report_cmd) {
      ropt.kind = *report::parse_kind(kind_text);
      if (!date_text.empty()) {
        const auto d = Date::parse(date_text);
        ropt.range = DateRange{d, d};
      } else if (!from_text.empty() || !to_text.empty()) {
        const Date first = from_text.empty() ? Date(1900, 1, 1) : Date::parse(from_text);
        const Date last = to_text.empty() ? Date(9999, 12, 31) : Date::parse(to_text);
        if (last < first) throw DomainError("empty date range", "date");
        ropt.range = DateRange{first, last};
      }
      const EvaluatedDataset data(load_dataset(snapshots_path, clients_path, lenient), config);
      for (const auto& p : report::run(data, ropt, out_dir)) std::cout << p.string() << '\n';
      return 0;
    }

    if (*synth_cmd) {
      spec.start = Date::parse(start_text);
      spec.validate();
      if (!no_anchor) config = anchor_bucket_var(config, Bucket::medium, anchor_bps);
      const auto data = generate_synthetic(spec, config, seed);
      fs::create_directories(out_dir);
      write_snapshots(data.snapshots, fs::path(out_dir) / "snapshots.csv");
      write_clients(data.clients, fs::path(out_dir) / "clients.csv");
      write_model(config, fs::path(out_dir) / "model.cfg");
      std::ofstream(fs::path(out_dir) / "manifest.json") << summarize(data.snapshots).to_json() << '\n';
      std::cout << "wrote " << data.snapshots.size() << " snapshots for " << data.clients.size()
                << " clients to " << out_dir << '\n';
      return 0;
    }

    if (*serve_cmd) {
      auto state = std::make_shared<service::State>();
      state->config = config;
      if (!snapshots_path.empty()) {
        state->dataset = std::make_shared<const EvaluatedDataset>(
            load_dataset(snapshots_path, clients_path, false), config);
      }
      httplib::Server server;
      service::install(server, state);
      std::cerr << "listening on " << host << ':' << port << " model " << config.fingerprint() << '\n';
      if (!server.listen(host, port)) {
        std::cerr << "error: cannot bind " << host << ':' << port << '\n';
        return 1;
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what();
    if (!e.field().empty()) std::cerr << " [" << e.field() << "]";
    std::cerr << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
