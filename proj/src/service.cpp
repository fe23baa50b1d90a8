#include "kycvar/service.hpp"

#include <httplib.h>

#include "kycvar/errors.hpp"
#include "kycvar/metrics.hpp"
#include "kycvar/var.hpp"

namespace kycvar::service {

namespace {

Vec5 vec5(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != kBuckets)
    throw SchemaError(field + " must be an array of 5 numbers", field);
  Vec5 v{};
  for (std::size_t i = 0; i < kBuckets; ++i) {
    if (!j[i].is_number()) throw SchemaError(field + " must be an array of 5 numbers", field);
    v[i] = j[i].get<double>();
  }
  return v;
}

RiskAllocation allocation(const Json& j, const std::string& field) {
  try {
    return RiskAllocation(vec5(j, field));
  } catch (const Error& e) {
    throw SchemaError(e.what(), field);
  }
}

std::vector<RiskAllocation> candidates(const Json& request) {
  if (!request.contains("candidates") || !request["candidates"].is_array() ||
      request["candidates"].empty()) {
    throw SchemaError("candidates must be a nonempty array of allocations", "candidates");
  }
  std::vector<RiskAllocation> out;
  for (std::size_t i = 0; i < request["candidates"].size(); ++i)
    out.push_back(allocation(request["candidates"][i], "candidates[" + std::to_string(i) + "]"));
  return out;
}

const Json& required(const Json& request, const std::string& field) {
  if (!request.is_object() || !request.contains(field))
    throw SchemaError("missing field " + field, field);
  return request[field];
}

double number(const Json& request, const std::string& field, double fallback) {
  if (!request.contains(field)) return fallback;
  if (!request[field].is_number()) throw SchemaError(field + " must be a number", field);
  return request[field].get<double>();
}

ModelConfig model_for(const State& state, const Json& request) {
  ModelConfig config = state.config;
  if (request.contains("model")) {
    const auto& m = request["model"];
    Mat5 rho{};
    const auto& rows = required(m, "rho");
    if (!rows.is_array() || rows.size() != kBuckets) throw SchemaError("rho must be 5x5", "model.rho");
    for (std::size_t i = 0; i < kBuckets; ++i) rho[i] = vec5(rows[i], "model.rho");
    config.model = BucketMarketModel(vec5(required(m, "mu"), "model.mu"),
                                     vec5(required(m, "sigma"), "model.sigma"), rho);
  }
  config.alpha = number(request, "alpha", config.alpha);
  if (!(config.alpha > 0.0 && config.alpha <= 0.5))
    throw DomainError("alpha must lie in (0, 0.5]", "alpha");
  return config;
}

template <typename F>
Response guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    return {400, error_body(e.what(), e.field(), e.row())};
  } catch (const Json::exception& e) {
    return {400, error_body(e.what())};
  }
}

std::optional<Date> pick_date(const EvaluatedDataset& data, const std::optional<std::string>& date) {
  if (date) return Date::parse(*date);
  if (data.dates().empty()) return std::nullopt;
  return data.dates().back();
}

Json summary_json(const WeightedSummary& s) {
  return Json{{"grain_id", s.grain_id},
              {"date", s.date.iso()},
              {"accounts", s.accounts},
              {"mean_market_value", s.mean_market_value},
              {"profile_var_bps", s.defined ? Json(s.profile_bps) : Json(nullptr)},
              {"portfolio_var_bps", s.defined ? Json(s.portfolio_bps) : Json(nullptr)},
              {"discrepancy_bps", s.defined ? Json(s.discrepancy_bps) : Json(nullptr)}};
}

Response dataset_missing() { return {404, error_body("no dataset loaded at startup")}; }

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

}  // namespace

Json error_body(const std::string& message, const std::string& field,
                std::optional<std::size_t> row) {
  Json j{{"error", message}};
  if (!field.empty()) j["field"] = field;
  if (row) j["row"] = *row;
  return j;
}

Response health() { return {200, Json{{"status", "ok"}}}; }

Response model_info(const State& state) {
  const auto& m = state.config.model;
  return {200, Json{{"mu", m.mu()},
                    {"sigma", m.sigma()},
                    {"rho", m.rho()},
                    {"alpha", state.config.alpha},
                    {"horizon", state.config.horizon},
                    {"fingerprint", state.config.fingerprint()}}};
}

Response whatif(const State& state, const Json& request) {
  return guarded([&]() -> Response {
    const auto config = model_for(state, request);
    const auto profile = allocation(required(request, "profile"), "profile");
    const auto cands = candidates(request);
    const double band = number(request, "band_bps", 0.0);
    std::optional<double> market_value;
    if (request.contains("market_value")) {
      market_value = number(request, "market_value", 0.0);
      if (*market_value < 0.0) throw DomainError("market value must be nonnegative", "market_value");
    }

    const VarEvaluator eval(config.model, config.alpha);
    const double profile_var = eval.bps(profile);
    Json out{{"alpha", config.alpha},
             {"model_fingerprint", config.fingerprint()},
             {"profile", profile.weights()},
             {"profile_var_bps", profile_var},
             {"candidates", Json::array()}};
    if (market_value) {
      out["market_value"] = *market_value;
      out["profile_dollar_var"] = var_dollars(*market_value, profile_var);
    }
    for (const auto& c : cands) {
      const double v = eval.bps(c);
      const double d = v - profile_var;
      Json row{{"portfolio", c.weights()},
               {"portfolio_var_bps", v},
               {"discrepancy_bps", d},
               {"classification", to_string(classify(d, band))}};
      if (market_value) {
        row["dollar_var"] = var_dollars(*market_value, v);
        row["dollar_discrepancy"] = var_dollars(*market_value, d);
      }
      out["candidates"].push_back(std::move(row));
    }
    return {200, out};
  });
}

Response metrics(const State& state, const Json& request) {
  return guarded([&]() -> Response {
    const auto& id = required(request, "metric");
    if (!id.is_string()) throw SchemaError("metric must be a string", "metric");
    const auto spec = parse_metric(id.get<std::string>());
    if (!spec) return {404, error_body("unknown metric '" + id.get<std::string>() + "'", "metric")};

    const auto config = model_for(state, request);
    MetricOptions options;
    options.alpha = config.alpha;
    options.kl_epsilon = number(request, "epsilon", kDefaultKlEpsilon);
    if (request.contains("scale")) {
      const auto s = request["scale"].get<std::string>();
      if (s == "percent") options.scale = Scale::percent;
      else if (s == "fraction") options.scale = Scale::fraction;
      else throw SchemaError("scale must be percent or fraction", "scale");
    }
    if (request.contains("penalty")) {
      const auto values = request["penalty"].get<std::vector<double>>();
      options.custom_penalty = make_penalty(PenaltyKind::custom, values);
    }
    const auto profile = allocation(required(request, "profile"), "profile");
    Json values = Json::array();
    for (const auto& c : candidates(request))
      values.push_back(evaluate_metric(*spec, profile, c, config.model, options));
    return {200, Json{{"metric", spec->id},
                      {"scale", options.scale == Scale::percent ? "percent" : "fraction"},
                      {"model_fingerprint", config.fingerprint()},
                      {"values", values}}};
  });
}

Response report_dealership(const State& state, const std::optional<std::string>& date) {
  if (!state.dataset) return dataset_missing();
  return guarded([&]() -> Response {
    const auto& data = *state.dataset;
    const auto d = pick_date(data, date);
    if (!d || data.rows_on(*d).empty()) throw DomainError("no accounts on that date", "date");
    std::vector<AccountMeasure> rows;
    for (auto i : data.rows_on(*d)) rows.push_back(data.measures()[i]);
    return {200, Json{{"model_fingerprint", data.config().fingerprint()},
                      {"summary", summary_json(weighted_summary("dealership", *d, rows))},
                      {"under_risked_share", under_risked_share(data, *d)}}};
  });
}

Response report_advisor(const State& state, const std::string& advisor_id,
                        const std::optional<std::string>& date) {
  if (!state.dataset) return dataset_missing();
  return guarded([&]() -> Response {
    const auto& data = *state.dataset;
    const auto d = pick_date(data, date);
    std::vector<AccountMeasure> rows;
    if (d)
      for (auto i : data.rows_on(*d))
        if (data.snapshots()[i].advisor_id == advisor_id) rows.push_back(data.measures()[i]);
    if (rows.empty()) return {404, error_body("no accounts for advisor " + advisor_id, "advisor")};
    return {200, Json{{"model_fingerprint", data.config().fingerprint()},
                      {"summary", summary_json(weighted_summary(advisor_id, *d, rows))}}};
  });
}

void install(httplib::Server& server, std::shared_ptr<const State> state) {
  auto body_of = [](const httplib::Request& req) { return Json::parse(req.body); };
  auto query = [](const httplib::Request& req, const char* key) -> std::optional<std::string> {
    if (req.has_param(key)) return req.get_param_value(key);
    return std::nullopt;
  };

  server.Get("/health", [](const httplib::Request&, httplib::Response& res) { reply(res, health()); });
  server.Get("/model", [state](const httplib::Request&, httplib::Response& res) {
    reply(res, model_info(*state));
  });
  server.Post("/whatif", [state, body_of](const httplib::Request& req, httplib::Response& res) {
    Json body;
    try {
      body = body_of(req);
    } catch (const Json::exception& e) {
      return reply(res, {400, error_body(std::string("malformed JSON: ") + e.what())});
    }
    reply(res, whatif(*state, body));
  });
  server.Post("/metrics", [state, body_of](const httplib::Request& req, httplib::Response& res) {
    Json body;
    try {
      body = body_of(req);
    } catch (const Json::exception& e) {
      return reply(res, {400, error_body(std::string("malformed JSON: ") + e.what())});
    }
    reply(res, metrics(*state, body));
  });
  server.Get("/report/dealership", [state, query](const httplib::Request& req, httplib::Response& res) {
    reply(res, report_dealership(*state, query(req, "date")));
  });
  server.Get(R"(/report/advisor/([^/]+))",
             [state, query](const httplib::Request& req, httplib::Response& res) {
               reply(res, report_advisor(*state, req.matches[1], query(req, "date")));
             });
}

}  // namespace kycvar::service
