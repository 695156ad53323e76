#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "crn/cli.hpp"
#include "schema_check.hpp"

using namespace crn;
using cli::RunConfig;

namespace {

const std::string kNetworksDir = CRN_NETWORKS_DIR;
const std::string kSchemasDir =
    std::string(CRN_NETWORKS_DIR) + "/../schemas";

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

RunResult run(RunConfig config) {
  std::ostringstream out, err;
  int code = cli::run(config, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("validate accepts the reference network") {
  RunConfig config;
  config.command = "validate";
  config.input = kNetworksDir + "/abb.crn";
  auto res = run(config);
  CHECK(res.exit_code == cli::kOk);
  json doc = json::parse(res.out);
  CHECK(doc["ok"] == true);
  std::string why;
  CHECK(schema::validate(doc, schema::load(kSchemasDir + "/validate.schema.json"), &why));
}

TEST_CASE("malformed input exits 2 with a span") {
  std::string path = "bad_input_test.crn";
  {
    std::ofstream f(path);
    f << "0 <-> A+B\nA -> A\n";
  }
  RunConfig config;
  config.command = "certify";
  config.input = path;
  auto res = run(config);
  CHECK(res.exit_code == cli::kInputError);
  json err = json::parse(res.err);
  CHECK(err["code"] == "self-loop");
  CHECK(err["span"]["line"] == 2);
  std::string why;
  CHECK(schema::validate(err, schema::load(kSchemasDir + "/error.schema.json"), &why));
  std::remove(path.c_str());
}

TEST_CASE("certify emits a schema-valid certificate and exit 0") {
  std::string path = "abb_copy_test.crn";
  {
    std::ofstream f(path);
    f << "0 <-> A+B\nB <-> 2B\n";
  }
  RunConfig config;
  config.command = "certify";
  config.input = path;
  config.initials = {{0, 0}};
  auto res = run(config);
  CHECK(res.exit_code == cli::kOk);
  json doc = json::parse(res.out);
  CHECK(doc["corollary"] == "cor3");
  CHECK(doc["m0"] == 1);
  CHECK(doc["n_star"] == 1);
  CHECK(doc["F_value"].get<double>() > 1.0);
  std::string why;
  CHECK(schema::validate(
      doc, schema::load(kSchemasDir + "/certificate.schema.json"), &why));
  // Output file lands beside the input.
  json file_doc = json::parse(slurp("abb_copy_test.cert.json"));
  CHECK(file_doc == doc);
  std::remove(path.c_str());
  std::remove("abb_copy_test.cert.json");
}

TEST_CASE("certify on the comparison network exits 1 with the reason") {
  RunConfig config;
  config.command = "certify";
  config.input = kNetworksDir + "/comparison.crn";
  auto res = run(config);
  CHECK(res.exit_code == cli::kNegative);
  json doc = json::parse(res.out);
  CHECK(doc["certificate"].is_null());
  CHECK(doc["reason"] == "no strong tier-1 cycle");
}

TEST_CASE("analyze reports structure for the display network") {
  RunConfig config;
  config.command = "analyze";
  config.input = kNetworksDir + "/crn1.crn";
  auto res = run(config);
  CHECK(res.exit_code == cli::kOk);
  json doc = json::parse(res.out);
  CHECK(doc["linkage_classes"].size() == 3);
  CHECK(doc["weakly_reversible"] == false);
  std::string why;
  CHECK(schema::validate(
      doc, schema::load(kSchemasDir + "/analysis.schema.json"), &why));
}

TEST_CASE("analyze reports the zero-deficiency anchor") {
  RunConfig config;
  config.command = "analyze";
  config.input = kNetworksDir + "/complex_nonexpo.crn";
  auto res = run(config);
  json doc = json::parse(res.out);
  CHECK(doc["deficiency"]["complexes"] == 5);
  CHECK(doc["deficiency"]["linkage_classes"] == 2);
  CHECK(doc["deficiency"]["stoich_dimension"] == 3);
  CHECK(doc["deficiency"]["deficiency"] == 0);
  CHECK(!doc["complex_balance"].is_null());
}

TEST_CASE("simulate writes a trajectory CSV deterministically") {
  std::string path = "sim_test.crn";
  {
    std::ofstream f(path);
    f << "0 <-> A+B\nB <-> 2B\n";
  }
  RunConfig config;
  config.command = "simulate";
  config.input = path;
  config.initials = {{0, 0}};
  config.t_max = 5.0;
  config.seed = 11;
  auto res1 = run(config);
  CHECK(res1.exit_code == cli::kOk);
  std::string csv1 = slurp("sim_test.traj.csv");
  auto res2 = run(config);
  std::string csv2 = slurp("sim_test.traj.csv");
  CHECK(csv1 == csv2);  // byte-identical under identical config+seed
  CHECK(csv1.substr(0, 6) == "t,A,B\n");
  config.seed = 12;
  run(config);
  CHECK(slurp("sim_test.traj.csv") != csv1);
  std::remove(path.c_str());
  std::remove("sim_test.traj.csv");
}

TEST_CASE("congestion command writes a schema-valid report") {
  std::string path = "cong_test.crn";
  {
    std::ofstream f(path);
    f << "0 <-> A+B\nB <-> 2B\n";
  }
  RunConfig config;
  config.command = "congestion";
  config.input = path;
  config.box = {8};
  auto res = run(config);
  CHECK(res.exit_code == cli::kOk);
  json doc = json::parse(res.out);
  CHECK(doc["supremum"].get<double>() > 0.0);
  std::string why;
  CHECK(schema::validate(
      doc, schema::load(kSchemasDir + "/congestion.schema.json"), &why));
  std::remove(path.c_str());
  std::remove("cong_test.congestion.json");
}

TEST_CASE("tvnorm writes per-initial curves") {
  std::string path = "tv_test.crn";
  {
    std::ofstream f(path);
    f << "0 <-> A+B\n0 <-> B\n";
  }
  RunConfig config;
  config.command = "tvnorm";
  config.input = path;
  config.initials = {{5, 0}, {8, 0}};
  config.box = {20};
  config.t_max = 40.0;
  config.grid = 2.0;
  auto res = run(config);
  CHECK(res.exit_code == cli::kOk);
  json doc = json::parse(res.out);
  REQUIRE(doc["curves"].size() == 2);
  for (const auto& c : doc["curves"])
    CHECK(c["log_slope"].get<double>() < 0.0);
  std::string csv = slurp("tv_test.tv.csv");
  CHECK(csv.find("# initial: 5 0") != std::string::npos);
  CHECK(csv.find("# initial: 8 0") != std::string::npos);
  CHECK(csv.find("t,tv_lower,tv_upper") != std::string::npos);
  std::remove(path.c_str());
  std::remove("tv_test.tv.csv");
}

TEST_CASE("unknown command is an input error") {
  RunConfig config;
  config.command = "explode";
  config.input = kNetworksDir + "/abb.crn";
  auto res = run(config);
  CHECK(res.exit_code == cli::kInputError);
}
