#include "kycvar/dataset.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "kycvar/errors.hpp"
#include "kycvar/text.hpp"

namespace kycvar {

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::array<std::pair<std::string_view, Enum>, N>& table,
                std::string_view field) {
  s = text::trim(s);
  for (const auto& [name, value] : table)
    if (name == s) return value;
  throw ParseError("unknown " + std::string(field) + " '" + std::string(s) + "'",
                   std::string(field));
}

void write_units(std::ostream& out, long long units) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%06lld", units / 1000000, units % 1000000);
  out << buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

constexpr std::array<std::pair<std::string_view, AccountType>, 8> kAccountTypes{{
    {"Cash", AccountType::cash},
    {"LIRA", AccountType::lira},
    {"RDSP", AccountType::rdsp},
    {"RESP", AccountType::resp},
    {"RIF", AccountType::rif},
    {"RSP", AccountType::rsp},
    {"TFSA", AccountType::tfsa},
    {"Margin", AccountType::margin},
}};

constexpr std::array<std::pair<std::string_view, AdvisoryType>, 3> kAdvisoryTypes{{
    {"discretionary", AdvisoryType::discretionary},
    {"non-discretionary", AdvisoryType::non_discretionary},
    {"unknown", AdvisoryType::unknown},
}};

AccountSnapshot parse_snapshot_row(std::string_view line) {
  const auto f = text::split(line, ',');
  if (f.size() != 17) {
    throw SchemaError("expected 17 columns, got " + std::to_string(f.size()));
  }
  AccountSnapshot s;
  s.account_id = std::string(text::trim(f[0]));
  s.client_id = std::string(text::trim(f[1]));
  s.advisor_id = std::string(text::trim(f[2]));
  if (s.account_id.empty()) throw SchemaError("empty account_id", "account_id");
  if (s.client_id.empty()) throw SchemaError("empty client_id", "client_id");
  if (s.advisor_id.empty()) throw SchemaError("empty advisor_id", "advisor_id");
  s.date = Date::parse(f[3]);
  s.account_type = parse_account_type(f[4]);
  s.advisory_type = parse_advisory_type(f[5]);
  s.market_value = text::to_double(f[6], "market_value");
  if (s.market_value < 0.0) throw SchemaError("negative market_value", "market_value");
  std::array<double, kBuckets> prof{};
  std::array<double, kBuckets> port{};
  for (std::size_t i = 0; i < kBuckets; ++i) {
    prof[i] = text::to_double(f[7 + i], "profile");
    port[i] = text::to_double(f[12 + i], "portfolio");
  }
  try {
    s.profile = RiskAllocation(prof);
  } catch (const SchemaError& e) {
    throw SchemaError(std::string("profile ") + e.what(), "profile");
  }
  try {
    s.portfolio = RiskAllocation(port);
  } catch (const SchemaError& e) {
    throw SchemaError(std::string("portfolio ") + e.what(), "portfolio");
  }
  return s;
}

}  // namespace

std::string_view to_string(Gender v) noexcept { return v == Gender::male ? "M" : "F"; }

std::string_view to_string(MaritalStatus v) noexcept {
  switch (v) {
    case MaritalStatus::married: return "M";
    case MaritalStatus::divorced: return "D";
    case MaritalStatus::single: return "S";
    case MaritalStatus::unknown: return "*";
  }
  return "*";
}

std::string_view to_string(Retired v) noexcept {
  switch (v) {
    case Retired::yes: return "yes";
    case Retired::no: return "no";
    case Retired::unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(AccountType v) noexcept {
  for (const auto& [name, value] : kAccountTypes)
    if (value == v) return name;
  return "Cash";
}

std::string_view to_string(AdvisoryType v) noexcept {
  for (const auto& [name, value] : kAdvisoryTypes)
    if (value == v) return name;
  return "unknown";
}

Gender parse_gender(std::string_view s) {
  return parse_enum<Gender, 2>(s, {{{"M", Gender::male}, {"F", Gender::female}}}, "gender");
}

MaritalStatus parse_marital_status(std::string_view s) {
  return parse_enum<MaritalStatus, 5>(s,
                                      {{{"M", MaritalStatus::married},
                                        {"D", MaritalStatus::divorced},
                                        {"S", MaritalStatus::single},
                                        {"*", MaritalStatus::unknown},
                                        {"unknown", MaritalStatus::unknown}}},
                                      "marital_status");
}

Retired parse_retired(std::string_view s) {
  return parse_enum<Retired, 3>(
      s, {{{"yes", Retired::yes}, {"no", Retired::no}, {"unknown", Retired::unknown}}}, "retired");
}

AccountType parse_account_type(std::string_view s) {
  return parse_enum(s, kAccountTypes, "account_type");
}

AdvisoryType parse_advisory_type(std::string_view s) {
  return parse_enum(s, kAdvisoryTypes, "advisory_type");
}

void ClientRecord::validate() const {
  if (client_id.empty()) throw SchemaError("empty client_id", "client_id");
  if (age < kMinimumAge) throw SchemaError("age below 18", "age");
  if (!(annual_income >= 0.0)) throw SchemaError("negative annual_income", "annual_income");
  if (investment_knowledge < 1 || investment_knowledge > 4)
    throw SchemaError("investment_knowledge outside 1..4", "investment_knowledge");
  if (cluster_label && (*cluster_label < 1 || *cluster_label > 5))
    throw SchemaError("cluster_label outside 1..5", "cluster_label");
}

std::string DatasetManifest::to_json() const {
  nlohmann::ordered_json j;
  j["first_date"] = first_date ? nlohmann::ordered_json(first_date->iso()) : nullptr;
  j["last_date"] = last_date ? nlohmann::ordered_json(last_date->iso()) : nullptr;
  j["accounts"] = accounts;
  j["clients"] = clients;
  j["advisors"] = advisors;
  j["dates"] = dates;
  j["rows_accepted"] = rows_accepted;
  j["rows_rejected"] = rows_rejected;
  auto& rej = j["rejections"] = nlohmann::ordered_json::array();
  for (const auto& r : rejections) rej.push_back({{"row", r.row}, {"reason", r.reason}});
  return j.dump(2);
}

DatasetManifest summarize(std::span<const AccountSnapshot> snapshots) {
  DatasetManifest m;
  std::unordered_set<std::string> accounts, clients, advisors;
  std::set<Date> dates;
  for (const auto& s : snapshots) {
    accounts.insert(s.account_id);
    clients.insert(s.client_id);
    advisors.insert(s.advisor_id);
    dates.insert(s.date);
  }
  m.accounts = accounts.size();
  m.clients = clients.size();
  m.advisors = advisors.size();
  m.dates = dates.size();
  m.rows_accepted = snapshots.size();
  if (!dates.empty()) {
    m.first_date = *dates.begin();
    m.last_date = *dates.rbegin();
  }
  return m;
}

ParsedSnapshots parse_snapshots(std::istream& in, Strictness strictness) {
  std::string line;
  if (!next_line(in, line) || text::trim(line) != kSnapshotHeader) {
    throw SchemaError("snapshot header does not match the expected columns", "header", 1);
  }
  std::vector<AccountSnapshot> rows;
  std::vector<Rejection> rejections;
  std::set<std::pair<std::string, Date>> seen;
  std::size_t row = 1;
  while (next_line(in, line)) {
    ++row;
    if (text::trim(line).empty()) continue;
    try {
      auto s = parse_snapshot_row(line);
      if (!seen.emplace(s.account_id, s.date).second) {
        throw SchemaError("duplicate (account_id, date) " + s.account_id + " " + s.date.iso(),
                          "account_id");
      }
      rows.push_back(std::move(s));
    } catch (const Error& e) {
      if (strictness == Strictness::strict) {
        throw ParseError("row " + std::to_string(row) + ": " + e.what(), e.field(), row);
      }
      rejections.push_back({row, e.what()});
    }
  }
  ParsedSnapshots out{std::move(rows), {}};
  out.manifest = summarize(out.snapshots);
  out.manifest.rows_rejected = rejections.size();
  out.manifest.rejections = std::move(rejections);
  return out;
}

ParsedSnapshots parse_snapshots(const std::filesystem::path& path, Strictness strictness) {
  auto in = open_in(path);
  return parse_snapshots(in, strictness);
}

void write_snapshots(std::span<const AccountSnapshot> snapshots, std::ostream& out) {
  out << kSnapshotHeader << '\n';
  for (const auto& s : snapshots) {
    out << s.account_id << ',' << s.client_id << ',' << s.advisor_id << ',' << s.date.iso() << ','
        << to_string(s.account_type) << ',' << to_string(s.advisory_type) << ','
        << text::fixed(s.market_value, 2);
    for (const auto* alloc : {&s.profile, &s.portfolio}) {
      for (long long u : to_micro_units(alloc->weights())) {
        out << ',';
        write_units(out, u);
      }
    }
    out << '\n';
  }
}

void write_snapshots(std::span<const AccountSnapshot> snapshots, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_snapshots(snapshots, out);
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<ClientRecord> parse_clients(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || text::trim(line) != kClientHeader) {
    throw SchemaError("client header does not match the expected columns", "header", 1);
  }
  std::vector<ClientRecord> out;
  std::unordered_set<std::string> seen;
  std::size_t row = 1;
  while (next_line(in, line)) {
    ++row;
    if (text::trim(line).empty()) continue;
    try {
      const auto f = text::split(line, ',');
      if (f.size() != 9) throw SchemaError("expected 9 columns, got " + std::to_string(f.size()));
      ClientRecord c;
      c.client_id = std::string(text::trim(f[0]));
      c.age = static_cast<int>(text::to_int(f[1], "age"));
      c.gender = parse_gender(f[2]);
      c.annual_income = text::to_double(f[3], "annual_income");
      c.investment_knowledge = static_cast<int>(text::to_int(f[4], "investment_knowledge"));
      c.marital_status = parse_marital_status(f[5]);
      c.residency = std::string(text::trim(f[6]));
      c.retired = parse_retired(f[7]);
      if (!text::trim(f[8]).empty())
        c.cluster_label = static_cast<int>(text::to_int(f[8], "cluster_label"));
      c.validate();
      if (!seen.insert(c.client_id).second) throw SchemaError("duplicate client_id", "client_id");
      out.push_back(std::move(c));
    } catch (const Error& e) {
      throw ParseError("row " + std::to_string(row) + ": " + e.what(), e.field(), row);
    }
  }
  return out;
}

std::vector<ClientRecord> parse_clients(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_clients(in);
}

void write_clients(std::span<const ClientRecord> clients, std::ostream& out) {
  out << kClientHeader << '\n';
  for (const auto& c : clients) {
    out << c.client_id << ',' << c.age << ',' << to_string(c.gender) << ','
        << text::fixed(c.annual_income, 0) << ',' << c.investment_knowledge << ','
        << to_string(c.marital_status) << ',' << c.residency << ',' << to_string(c.retired) << ',';
    if (c.cluster_label) out << *c.cluster_label;
    out << '\n';
  }
}

void write_clients(std::span<const ClientRecord> clients, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_clients(clients, out);
  if (!out) throw IoError("failed writing " + path.string());
}

ModelConfig parse_model(std::istream& in) {
  std::optional<Vec5> mu, sigma;
  std::optional<Mat5> rho;
  std::optional<double> alpha;
  std::string horizon = "1d";

  auto vec5 = [](std::string_view list, std::string_view field) {
    const auto v = text::to_doubles(list, field);
    if (v.size() != kBuckets) {
      throw SchemaError(std::string(field) + " needs 5 values, got " + std::to_string(v.size()),
                        std::string(field));
    }
    Vec5 out{};
    std::copy(v.begin(), v.end(), out.begin());
    return out;
  };

  std::string raw;
  std::size_t line_no = 0;
  auto content_line = [&](std::string& out) {
    while (next_line(in, raw)) {
      ++line_no;
      std::string_view s = raw;
      if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
      s = text::trim(s);
      if (!s.empty()) {
        out = std::string(s);
        return true;
      }
    }
    return false;
  };

  std::string line;
  while (content_line(line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw SchemaError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = std::string(text::trim(std::string_view(line).substr(0, eq)));
    const auto value = text::trim(std::string_view(line).substr(eq + 1));
    if (key == "mu") {
      mu = vec5(value, "mu");
    } else if (key == "sigma") {
      sigma = vec5(value, "sigma");
    } else if (key == "alpha") {
      alpha = text::to_double(value, "alpha");
    } else if (key == "horizon") {
      horizon = std::string(value);
    } else if (key == "rho") {
      if (!value.empty()) throw SchemaError("rho rows go on the following 5 lines", "rho");
      Mat5 m{};
      for (std::size_t i = 0; i < kBuckets; ++i) {
        std::string row;
        if (!content_line(row)) throw SchemaError("rho needs 5 rows", "rho");
        m[i] = vec5(row, "rho");
      }
      rho = m;
    } else {
      throw SchemaError("unknown key '" + key + "'", key);
    }
  }
  if (!mu) throw SchemaError("missing mu", "mu");
  if (!sigma) throw SchemaError("missing sigma", "sigma");
  if (!rho) throw SchemaError("missing rho", "rho");
  const double a = alpha.value_or(0.01);
  if (!(a > 0.0 && a <= 0.5)) throw DomainError("alpha must lie in (0, 0.5]", "alpha");
  return ModelConfig{BucketMarketModel(*mu, *sigma, *rho), a, horizon};
}

ModelConfig parse_model(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_model(in);
}

void write_model(const ModelConfig& config, std::ostream& out) {
  auto row = [&out](const Vec5& v) {
    for (std::size_t i = 0; i < kBuckets; ++i) out << (i ? ", " : "") << text::shortest(v[i]);
    out << '\n';
  };
  out << "# Bucket market model: annualized percent returns and volatilities\n";
  out << "mu = ";
  row(config.model.mu());
  out << "sigma = ";
  row(config.model.sigma());
  out << "alpha = " << text::shortest(config.alpha) << '\n';
  out << "horizon = " << config.horizon << '\n';
  out << "rho =\n";
  for (const auto& r : config.model.rho()) row(r);
}

void write_model(const ModelConfig& config, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_model(config, out);
}

ModelConfig load_model_or_default(const std::optional<std::filesystem::path>& path) {
  if (path) return parse_model(*path);
  if (const char* env = std::getenv(kModelEnvVar); env && *env) {
    return parse_model(std::filesystem::path(env));
  }
  return ModelConfig{};
}

}  // namespace kycvar
