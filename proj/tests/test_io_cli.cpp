#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ginibeta/cli.hpp"
#include "ginibeta/error.hpp"
#include "ginibeta/io.hpp"

using namespace ginibeta;
using io::Json;

namespace {

std::string data(const char* name) { return std::string(GINIBETA_TEST_DATA) + "/" + name; }

ErrorKind csv_error(const std::string& text, std::string* message = nullptr) {
  std::istringstream in(text);
  try {
    io::read_csv(in);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  FAIL("no error for: " << text);
  return ErrorKind::usage;
}

cli::RunConfig config(const std::string& command) {
  cli::RunConfig c;
  c.command = command;
  return c;
}

Json report_of(const cli::RunOutcome& o) {
  INFO(o.error);
  REQUIRE(o.exit_code == 0);
  return Json::parse(o.report);
}

// Everything except the wall-clock timing.
Json without_timing(Json j) {
  j.erase("timing");
  return j;
}

}  // namespace

TEST_CASE("csv with header", "[cli]") {
  std::istringstream in("x,y\n1,1\n2,2\n");
  const auto s = io::read_csv(in);
  CHECK(s.size() == 2);
  CHECK(s.tie_count() == 0);
  std::istringstream swapped("y,x\n1,10\n2,20\n3,30\n");
  const auto t = io::read_csv(swapped, true);
  CHECK(t.x()[2] == 30.0);
  CHECK(t.y()[2] == 3.0);
}

TEST_CASE("csv errors name every bad line", "[cli]") {
  std::string msg;
  CHECK(csv_error("x,y\n1,2\n\n3,NaN\n4,5\n", &msg) == ErrorKind::ingestion);
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("line 4") != std::string::npos);
  CHECK(csv_error("1,2\n3\n") == ErrorKind::ingestion);
  CHECK(csv_error("1,2\n3,4,5\n") == ErrorKind::ingestion);
  CHECK(csv_error("1,2\n3,abc\n") == ErrorKind::ingestion);
  CHECK(csv_error("1,2\n") == ErrorKind::ingestion);
  CHECK(csv_error("1,2\n3,inf\n") == ErrorKind::ingestion);
  CHECK_THROWS_AS(io::ingest_csv(data("does-not-exist.csv")), Error);
}

TEST_CASE("json numbers keep 17 significant digits", "[cli]") {
  Json j;
  j["third"] = 1.0 / 3.0;
  j["nan"] = std::nan("");
  j["list"] = Json::array({0.1, 2});
  const std::string text = io::dump(j);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  CHECK(text.find("null") != std::string::npos);
  const Json back = Json::parse(text);
  CHECK(back["third"].get<double>() == 1.0 / 3.0);
  CHECK(back["list"][0].get<double>() == 0.1);
}

TEST_CASE("weight and model specs", "[cli]") {
  CHECK(io::parse_weight("pht:0.75").parameter() == 0.75);
  CHECK(io::parse_weight("cte:0.95").family() == WeightFamily::cte);
  CHECK(io::parse_weight("identity").family() == WeightFamily::tabulated);
  CHECK(io::parse_weight(R"({"family":"tabulated","grid":[[0.25,0],[0.75,1]]})")(0.5) == 0.5);
  CHECK_THROWS_AS(io::parse_weight("pht"), Error);
  CHECK_THROWS_AS(io::parse_weight("cosine:1"), Error);
  CHECK(io::parse_model("gaussian:0.6").gaussian->rho == 0.6);
  CHECK(io::parse_model("lognormal:0.1").name.find("lognormal") != std::string::npos);
  CHECK(io::parse_model(R"({"family":"gaussian","rho":0.3,"var_x":2})").gaussian->var_x == 2.0);
  CHECK_THROWS_AS(io::parse_model(R"({"family":"gaussian"})"), Error);

  const auto m = io::moments_from_json(Json::parse(R"({"y_moment":"inf","x_moment":{"order":3,"attained":true},
                                                       "cdf_continuous":true})"));
  CHECK(std::isinf(m.y_moment->order));
  CHECK(m.x_moment->covers(3.0));
  CHECK(io::moments_to_json(m)["y_moment"]["order"] == "inf");
}

TEST_CASE("estimate end to end", "[cli]") {
  auto c = config("estimate");
  c.input_path = data("three.csv");
  c.weight = "identity";
  const Json r = report_of(cli::run(c));
  CHECK(r["schema_version"] == "1.0");
  CHECK(r["command"] == "estimate");
  CHECK(std::abs(r["results"]["delta_hat"].get<double>() - 1.0 / 26.0) < 1e-12);
  CHECK(r["results"]["tie_count"] == 0);
  CHECK(r["timing"].contains("simd_backend"));

  c.input_path = data("linear.csv");
  c.y_first = true;
  c.weight = "pht:0.75";
  const Json lin = report_of(cli::run(c));
  CHECK(std::abs(lin["results"]["beta_hat"].get<double>() - 2.0) < 1e-12);
  CHECK(std::abs(lin["results"]["delta_hat"].get<double>()) < 1e-12);
}

TEST_CASE("exit codes", "[cli]") {
  auto c = config("estimate");
  c.input_path = data("bad.csv");
  c.weight = "identity";
  auto o = cli::run(c);
  CHECK(o.exit_code == 2);
  CHECK(o.report.empty());
  const Json err = Json::parse(o.error);
  CHECK(err["error"]["kind"] == "ingestion");
  CHECK(err["error"]["exit_code"] == 2);

  c.input_path = data("three.csv");
  c.weight.reset();
  CHECK(cli::run(c).exit_code == 2);

  auto v = config("variance");
  v.model = "pareto:0.1";
  v.weight = "identity";
  o = cli::run(v);
  CHECK(o.exit_code == 3);
  CHECK(Json::parse(o.error)["error"]["kind"] == "assumption-violation");

  auto e = config("estimate");
  e.input_path = data("header.csv");
  e.weight = "pht:1";
  o = cli::run(e);
  CHECK(o.exit_code == 1);
  CHECK(Json::parse(o.error)["error"]["kind"] == "degenerate-weight");

  CHECK(cli::run(config("frobnicate")).exit_code == 2);
  CHECK(exit_code_for(ErrorKind::numeric_quality) == 1);
  CHECK(exit_code_for(ErrorKind::invalid_parameter) == 2);
}

TEST_CASE("check-assumptions reports verdicts", "[cli]") {
  auto c = config("check-assumptions");
  c.weight = "pht:0.4";
  c.theorem = "T2";
  c.moments = R"({"y_moment":"inf","cdf_continuous":true,"cond_second_moment":"inf"})";
  const Json r = report_of(cli::run(c));
  CHECK(r["results"]["overall"] == "violated");
  CHECK(r["results"]["binding"] == "weight-square-integrable");

  c.weight = "pht:0.75";
  c.theorem = "T3";
  c.moments.reset();
  c.model = "gaussian:0.5";
  const Json t3 = report_of(cli::run(c));
  CHECK(t3["results"]["overall"] == "satisfied");
  CHECK(t3["results"]["b_exponent"] == 0.5);
  CHECK(t3["results"]["required_moment_order"] == 4.0);
}

TEST_CASE("variance command", "[cli]") {
  auto c = config("variance");
  c.model = "gaussian:0.6";
  c.weight = "cte:0.75";
  const Json r = report_of(cli::run(c));
  const double u1 = r["results"]["upsilon1_sq"].get<double>();
  CHECK(std::abs(u1 / 0.54833118023057246 - 1.0) < 1e-8);
  CHECK(std::abs(r["results"]["gaussian_upsilon1_sq"].get<double>() / u1 - 1.0) < 1e-6);
}

TEST_CASE("seeded commands are reproducible", "[cli]") {
  auto c = config("infer");
  c.input_path = data("linear.csv");
  c.y_first = true;
  c.weight = "cte:0.5";
  BootstrapSpec b;
  b.replicates = 300;
  b.seed = 99;
  c.bootstrap = b;
  const Json a = report_of(cli::run(c));
  CHECK(without_timing(a) == without_timing(report_of(cli::run(c))));
  CHECK(std::abs(a["results"]["ci_low"].get<double>()) < 1e-12);

  auto s = config("simulate");
  s.plan_path = data("plan_small.json");
  const auto first = cli::run(s);
  const auto second = cli::run(s);
  CHECK(without_timing(report_of(first)) == without_timing(report_of(second)));
  const Json sr = report_of(first);
  CHECK(sr["results"]["per_n"].size() == 2);
  CHECK(sr["results"]["per_n"][0].contains("variance_ratio"));
}

TEST_CASE("command line parsing writes reports to a file", "[cli]") {
  const auto out = std::filesystem::temp_directory_path() / "ginibeta_cli_test.json";
  const std::string input = data("three.csv");
  const std::string output = out.string();
  std::vector<std::string> args{"ginibeta", "estimate", "--input", input, "--weight", "identity", "--output", output};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  CHECK(cli::main(static_cast<int>(argv.size()), argv.data()) == 0);
  std::ifstream in(out);
  const Json r = Json::parse(in);
  CHECK(r["command"] == "estimate");
  std::filesystem::remove(out);

  std::vector<std::string> bad{"ginibeta", "estimate", "--no-such-flag"};
  std::vector<char*> bargv;
  for (auto& a : bad) bargv.push_back(a.data());
  CHECK(cli::main(static_cast<int>(bargv.size()), bargv.data()) == 2);
}
