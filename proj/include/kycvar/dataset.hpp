#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kycvar/allocation.hpp"
#include "kycvar/date.hpp"
#include "kycvar/market_model.hpp"

namespace kycvar {

enum class Gender { male, female };
enum class MaritalStatus { married, divorced, single, unknown };
enum class Retired { yes, no, unknown };
enum class AccountType { cash, lira, rdsp, resp, rif, rsp, tfsa, margin };
enum class AdvisoryType { discretionary, non_discretionary, unknown };

std::string_view to_string(Gender v) noexcept;
std::string_view to_string(MaritalStatus v) noexcept;
std::string_view to_string(Retired v) noexcept;
std::string_view to_string(AccountType v) noexcept;
std::string_view to_string(AdvisoryType v) noexcept;

Gender parse_gender(std::string_view s);
MaritalStatus parse_marital_status(std::string_view s);
Retired parse_retired(std::string_view s);
AccountType parse_account_type(std::string_view s);
AdvisoryType parse_advisory_type(std::string_view s);

inline constexpr int kMinimumAge = 18;

struct ClientRecord {
  std::string client_id;
  int age = kMinimumAge;
  Gender gender = Gender::female;
  double annual_income = 0.0;   // CAD
  int investment_knowledge = 1;  // 1 poor .. 4 sophisticated
  MaritalStatus marital_status = MaritalStatus::unknown;
  std::string residency;
  Retired retired = Retired::unknown;
  std::optional<int> cluster_label;  // 1..5

  /// Throws SchemaError on a violated invariant.
  void validate() const;
};

/// One account on one date.
struct AccountSnapshot {
  std::string account_id;
  std::string client_id;
  std::string advisor_id;
  Date date;
  AccountType account_type = AccountType::cash;
  AdvisoryType advisory_type = AdvisoryType::unknown;
  double market_value = 0.0;
  RiskAllocation profile = RiskAllocation::one_hot(Bucket::medium);
  RiskAllocation portfolio = RiskAllocation::one_hot(Bucket::medium);
};

struct Rejection {
  std::size_t row = 0;  // 1-based line number including the header
  std::string reason;
};

struct DatasetManifest {
  std::optional<Date> first_date;
  std::optional<Date> last_date;
  std::size_t accounts = 0;
  std::size_t clients = 0;
  std::size_t advisors = 0;
  std::size_t dates = 0;
  std::size_t rows_accepted = 0;
  std::size_t rows_rejected = 0;
  std::vector<Rejection> rejections;

  std::string to_json() const;
};

DatasetManifest summarize(std::span<const AccountSnapshot> snapshots);

enum class Strictness { strict, lenient };

struct ParsedSnapshots {
  std::vector<AccountSnapshot> snapshots;
  DatasetManifest manifest;
};

inline constexpr std::string_view kSnapshotHeader =
    "account_id,client_id,advisor_id,date,account_type,advisory_type,market_value,"
    "prof_low,prof_lowmed,prof_med,prof_medhigh,prof_high,"
    "port_low,port_lowmed,port_med,port_medhigh,port_high";

inline constexpr std::string_view kClientHeader =
    "client_id,age,gender,annual_income,investment_knowledge,marital_status,residency,retired,"
    "cluster_label";

/// Strict mode throws on the first bad row (message names the row); lenient
/// mode skips bad rows and records each reason in the manifest. A bad header
/// is fatal in both modes.
ParsedSnapshots parse_snapshots(std::istream& in, Strictness strictness = Strictness::strict);
ParsedSnapshots parse_snapshots(const std::filesystem::path& path,
                                Strictness strictness = Strictness::strict);

/// Canonical form: schema column order, fractions with 6 decimals, market
/// value with 2 decimals, ISO dates.
void write_snapshots(std::span<const AccountSnapshot> snapshots, std::ostream& out);
void write_snapshots(std::span<const AccountSnapshot> snapshots, const std::filesystem::path& path);

std::vector<ClientRecord> parse_clients(std::istream& in);
std::vector<ClientRecord> parse_clients(const std::filesystem::path& path);
void write_clients(std::span<const ClientRecord> clients, std::ostream& out);
void write_clients(std::span<const ClientRecord> clients, const std::filesystem::path& path);

/// Model configuration file:
///
///     # comment
///     mu    = 0.52, 1.97, 2.21, 2.93, 4.23
///     sigma = 0.13, 5.53, 6.48, 9.68, 15.22
///     alpha = 0.01
///     horizon = 1d
///     rho =
///     1, -0.22, -0.16, -0.23, 0.07
///     ... four more rows
///
/// `mu`, `sigma` and `rho` are required; `alpha` defaults to 0.01.
ModelConfig parse_model(std::istream& in);
ModelConfig parse_model(const std::filesystem::path& path);
void write_model(const ModelConfig& config, std::ostream& out);
void write_model(const ModelConfig& config, const std::filesystem::path& path);

/// Environment variable naming the default model file.
inline constexpr const char* kModelEnvVar = "KYCVAR_MODEL";

/// Loads `path` if given, else $KYCVAR_MODEL if set, else the built-in
/// reference model.
ModelConfig load_model_or_default(const std::optional<std::filesystem::path>& path);

/// Snapshots plus the client table they refer to.
struct Dataset {
  std::vector<ClientRecord> clients;
  std::vector<AccountSnapshot> snapshots;
};

}  // namespace kycvar
