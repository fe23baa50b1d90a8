#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kycvar/dataset.hpp"
#include "kycvar/errors.hpp"

using namespace kycvar;

namespace {

std::string header() { return std::string(kSnapshotHeader) + "\n"; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kRow = "A1,C1,V1,2019-03-29,RSP,discretionary,1000.00,20,10,70,0,0,0,0,100,0,0\n";

}  // namespace

TEST_CASE("single row with percent allocations") {
  std::istringstream in(header() + kRow);
  const auto p = parse_snapshots(in);
  REQUIRE(p.snapshots.size() == 1);
  const auto& s = p.snapshots[0];
  CHECK(s.profile[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(s.profile[2] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(s.portfolio == RiskAllocation::one_hot(Bucket::medium));
  CHECK(s.account_type == AccountType::rsp);
  CHECK(s.date == Date(2019, 3, 29));
  CHECK(p.manifest.rows_accepted == 1);
}

TEST_CASE("allocation summing to 90") {
  const std::string bad = "A2,C1,V1,2019-03-29,RSP,discretionary,1000.00,20,10,60,0,0,0,0,100,0,0\n";
  {
    std::istringstream in(header() + kRow + bad);
    try {
      parse_snapshots(in);
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.row() == 3u);
      CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
  }
  std::istringstream in(header() + kRow + bad);
  const auto p = parse_snapshots(in, Strictness::lenient);
  CHECK(p.snapshots.size() == 1);
  CHECK(p.manifest.rows_rejected == 1);
  REQUIRE(p.manifest.rejections.size() == 1);
  CHECK(p.manifest.rejections[0].row == 3);
}

TEST_CASE("snapshot schema errors") {
  auto strict = [](const std::string& body) {
    std::istringstream in(body);
    return parse_snapshots(in);
  };
  CHECK_THROWS_AS(strict("account_id,client_id\n" + kRow), Error);
  CHECK_THROWS_AS(strict(header() + kRow + kRow), Error);  // duplicate key
  CHECK_THROWS_AS(strict(header() + "A1,C1,V1,2019-02-30,RSP,discretionary,1,1,0,0,0,0,1,0,0,0,0\n"), Error);
  CHECK_THROWS_AS(strict(header() + "A1,C1,V1,2019-03-29,XYZ,discretionary,1,1,0,0,0,0,1,0,0,0,0\n"), Error);
  CHECK_THROWS_AS(strict(header() + "A1,C1,V1,2019-03-29,RSP,discretionary,-5,1,0,0,0,0,1,0,0,0,0\n"), Error);
  CHECK_THROWS_AS(strict(header() + "A1,C1,V1,2019-03-29,RSP,discretionary,1,1,0,0,0,0,1,0,0,0\n"), Error);
  CHECK_THROWS_AS(strict(header() + "A1,C1,V1,2019-03-29,RSP,discretionary,abc,1,0,0,0,0,1,0,0,0,0\n"), Error);
  CHECK(strict(header()).snapshots.empty());
}

TEST_CASE("write snapshots canonical form") {
  std::istringstream in(header() + kRow);
  const auto p = parse_snapshots(in);
  std::ostringstream out;
  write_snapshots(p.snapshots, out);
  CHECK(out.str() == header() +
                         "A1,C1,V1,2019-03-29,RSP,discretionary,1000.00,0.200000,0.100000,0.700000,0.000000,"
                         "0.000000,0.000000,0.000000,1.000000,0.000000,0.000000\n");
  std::ostringstream empty;
  write_snapshots({}, empty);
  CHECK(empty.str() == header());
}

TEST_CASE("golden file round trips byte for byte") {
  const auto path = std::filesystem::path(KYCVAR_TEST_DATA) / "golden_snapshots.csv";
  const auto original = slurp(path);
  const auto parsed = parse_snapshots(path);
  CHECK(parsed.snapshots.size() == 1000);
  std::ostringstream out;
  write_snapshots(parsed.snapshots, out);
  CHECK(out.str() == original);
}

TEST_CASE("client records") {
  const std::string text = std::string(kClientHeader) +
                           "\nC1,57,F,64000,3,M,ON,no,2\nC2,18,M,0,1,*,QC,unknown,\n";
  std::istringstream in(text);
  const auto clients = parse_clients(in);
  REQUIRE(clients.size() == 2);
  CHECK(clients[0].cluster_label == 2);
  CHECK_FALSE(clients[1].cluster_label.has_value());
  CHECK(clients[1].marital_status == MaritalStatus::unknown);
  std::ostringstream out;
  write_clients(clients, out);
  CHECK(out.str() == text);

  ClientRecord young;
  young.client_id = "C3";
  young.age = 17;
  CHECK_THROWS_AS(young.validate(), SchemaError);
  ClientRecord bad_cluster;
  bad_cluster.cluster_label = 6;
  CHECK_THROWS_AS(bad_cluster.validate(), SchemaError);
  ClientRecord bad_income;
  bad_income.annual_income = -1;
  CHECK_THROWS_AS(bad_income.validate(), SchemaError);
}

TEST_CASE("model config") {
  const auto cfg = parse_model(std::filesystem::path(KYCVAR_TEST_DATA) / ".." / ".." / "data" / "default_model.cfg");
  CHECK(cfg.model.mu()[4] == 4.23);
  CHECK(cfg.model.sigma()[4] == 15.22);
  CHECK(cfg.model.rho()[1][2] == 0.79);
  CHECK(cfg.fingerprint() == ModelConfig{}.fingerprint());

  std::ostringstream out;
  write_model(cfg, out);
  std::istringstream back(out.str());
  CHECK(parse_model(back).canonical() == cfg.canonical());

  std::istringstream range("mu = 1,1,1,1,1\nsigma = 1,1,1,1,1\nrho =\n1,1.5,0,0,0\n1.5,1,0,0,0\n0,0,1,0,0\n0,0,0,1,0\n0,0,0,0,1\n");
  CHECK_THROWS_AS(parse_model(range), Error);
  std::istringstream ident("mu = 1,1,1,1,1\nsigma = 1,2,3,4,5\nrho =\n1,0,0,0,0\n0,1,0,0,0\n0,0,1,0,0\n0,0,0,1,0\n0,0,0,0,1\n");
  const auto id = parse_model(ident);
  CHECK(id.model.covariance()[4][4] == 25.0);
  CHECK(id.model.covariance()[0][1] == 0.0);
  std::istringstream short_mu("mu = 1,1,1,1\nsigma = 1,1,1,1,1\nrho =\n1,0,0,0,0\n0,1,0,0,0\n0,0,1,0,0\n0,0,0,1,0\n0,0,0,0,1\n");
  CHECK_THROWS_AS(parse_model(short_mu), Error);
  std::istringstream missing("mu = 1,1,1,1,1\n");
  CHECK_THROWS_AS(parse_model(missing), Error);
}

TEST_CASE("model from environment") {
  const auto path = std::filesystem::temp_directory_path() / "kycvar_env_model.cfg";
  ModelConfig cfg;
  cfg.alpha = 0.05;
  write_model(cfg, path);
  ::setenv(kModelEnvVar, path.c_str(), 1);
  CHECK(load_model_or_default(std::nullopt).alpha == 0.05);
  ::unsetenv(kModelEnvVar);
  CHECK(load_model_or_default(std::nullopt).alpha == 0.01);
  std::filesystem::remove(path);
}

TEST_CASE("manifest") {
  std::istringstream in(header() + kRow +
                        "A1,C1,V1,2019-04-01,RSP,discretionary,1000.00,20,10,70,0,0,0,0,100,0,0\n");
  const auto m = parse_snapshots(in).manifest;
  CHECK(m.accounts == 1);
  CHECK(m.dates == 2);
  CHECK(m.first_date == Date(2019, 3, 29));
  CHECK(m.to_json().find("\"rows_accepted\": 2") != std::string::npos);
}
