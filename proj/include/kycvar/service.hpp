#pragma once

#include <memory>
#include <json.hpp>
#include <optional>
#include <string>

#include "kycvar/analytics.hpp"

namespace httplib {
class Server;
}

// JSON request handlers for the what-if service. Handlers are pure functions
// of (state, request) so they are tested without a socket; `install` binds
// them to HTTP routes.
namespace kycvar::service {

using Json = nlohmann::ordered_json;

struct Response {
  int status = 200;
  Json body;
};

/// Immutable startup state shared by all requests.
struct State {
  ModelConfig config;
  std::shared_ptr<const EvaluatedDataset> dataset;  // enables /report routes
};

Json error_body(const std::string& message, const std::string& field = {},
                std::optional<std::size_t> row = std::nullopt);

Response health();

/// GET /model: mu, sigma, rho, alpha, horizon, fingerprint.
Response model_info(const State& state);

/// POST /whatif
///   {"profile": [5], "candidates": [[5], ...], "market_value"?: CAD,
///    "alpha"?: p, "band_bps"?: b, "model"?: {"mu", "sigma", "rho"}}
/// Allocations are fractions or percents. Response carries profile VaR, per
/// candidate VaR, discrepancy, classification and dollar VaR when a market
/// value is given, plus the model fingerprint.
Response whatif(const State& state, const Json& request);

/// POST /metrics
///   {"profile": [5], "candidates": [[5], ...], "metric": id,
///    "scale"?: "percent"|"fraction", "epsilon"?: e, "penalty"?: [25]}
/// Unknown metric ids give 404.
Response metrics(const State& state, const Json& request);

/// GET /report/dealership?date=YYYY-MM-DD (defaults to the last date).
Response report_dealership(const State& state, const std::optional<std::string>& date);
/// GET /report/advisor/<id>?date=YYYY-MM-DD
Response report_advisor(const State& state, const std::string& advisor_id,
                        const std::optional<std::string>& date);

void install(httplib::Server& server, std::shared_ptr<const State> state);

}  // namespace kycvar::service
