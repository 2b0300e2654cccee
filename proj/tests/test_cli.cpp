#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using json = nlohmann::ordered_json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

RunResult run_cli(const std::string& args) {
  const char* bin = std::getenv("PTW_CLI");
  REQUIRE_MESSAGE(bin != nullptr, "PTW_CLI must point at the ptw binary");
  std::string out_path = "/tmp/ptw_test_stdout";
  std::string err_path = "/tmp/ptw_test_stderr";
  std::string cmd = std::string(bin) + " " + args + " >" + out_path + " 2>" + err_path;
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

}  // namespace

TEST_CASE("exact: closed-form value 4/3") {
  auto r = run_cli("exact --case complex --word w,r --d1 3 --d2 3 --p 9");
  REQUIRE(r.exit_code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["value"]["num"] == "4");
  CHECK(doc["value"]["den"] == "3");
  CHECK(doc["word"] == "w,r");
  CHECK(doc["eta"] == json::array({1, -1}));
}

TEST_CASE("exact: real case") {
  auto r = run_cli("exact --case real --word w,r --d1 2 --d2 3 --p 6");
  REQUIRE(r.exit_code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["value"]["num"] == "11");
  CHECK(doc["value"]["den"] == "6");
}

TEST_CASE("exact: real case rejects left_pt with exit 2") {
  auto r = run_cli("exact --case real --word w,l --d1 2 --d2 2 --p 2");
  CHECK(r.exit_code == 2);
  auto err = json::parse(r.err);
  CHECK(err.contains("error"));
}

TEST_CASE("word parse errors name the token and position") {
  auto r = run_cli("exact --word w,x --d1 2 --d2 2 --p 2");
  CHECK(r.exit_code == 2);
  auto err = json::parse(r.err);
  std::string msg = err["error"];
  CHECK(msg.find("x") != std::string::npos);
  CHECK(msg.find("position 2") != std::string::npos);
}

TEST_CASE("usage error: missing required flag") {
  auto r = run_cli("exact --word w");
  CHECK(r.exit_code == 2);
  CHECK(json::parse(r.err).contains("error"));
}

TEST_CASE("limit: (w,r) in the growing regime is c^2") {
  auto r = run_cli("limit --word w,r --regime both --c 1/2");
  REQUIRE(r.exit_code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["value"]["num"] == "1");
  CHECK(doc["value"]["den"] == "4");
}

TEST_CASE("limit: fixed regime requires --d") {
  auto r = run_cli("limit --word w,r --regime d2-fixed --c 1/2");
  CHECK(r.exit_code == 2);
}

TEST_CASE("freeness: growing regime is all zero") {
  auto r = run_cli("freeness --alphabet w,l,r,t --max-len 3 --regime both --c 1/2");
  REQUIRE(r.exit_code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["all_zero"] == true);
  CHECK(doc["rows"].size() > 0);
}

TEST_CASE("freeness: d2-fixed witness in CSV") {
  auto r = run_cli("freeness --alphabet w,r --max-len 2 --regime d2-fixed --d 2 --c 1/3 --format csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("word,value_num,value_den,value_decimal") == 0);
  // kappa_2(W, W^Gamma) = c/d2 = 1/6
  CHECK(r.out.find("\"w,r\",1,6,") != std::string::npos);
}

TEST_CASE("laws: bn cumulants alternate cd, cd^2") {
  auto r = run_cli("laws --law bn --d 2 --c 0.5 --max-n 6");
  REQUIRE(r.exit_code == 0);
  auto doc = json::parse(r.out);
  REQUIRE(doc["cumulants"].size() == 6);
  for (int n = 1; n <= 6; ++n) {
    CHECK(doc["cumulants"][n - 1]["num"] == (n % 2 ? "1" : "2"));
    CHECK(doc["cumulants"][n - 1]["den"] == "1");
  }
}

TEST_CASE("laws: density samples for MP") {
  auto r = run_cli("laws --law mp --c 1/4 --max-n 2 --density-points 16");
  REQUIRE(r.exit_code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["density"]["atom_at_zero"] == doctest::Approx(0.75));
  CHECK(doc["density"]["points"].size() == 16);
}

TEST_CASE("laws: mpdiff requires --c-minus") {
  auto r = run_cli("laws --law mpdiff --c 1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("mc: embeds the exact reference and a z-score") {
  auto r = run_cli("mc --case real --word w,r --d1 2 --d2 3 --p 6 --samples 20000 --seed 7");
  REQUIRE(r.exit_code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["exact"]["num"] == "11");
  CHECK(doc["exact"]["den"] == "6");
  CHECK(std::abs(doc["z"].get<double>()) <= 4.0);
  CHECK(doc["stderr"].get<double>() > 0.0);
}

TEST_CASE("mc: deterministic for a fixed seed") {
  auto a = run_cli("mc --word w,r --d1 2 --d2 2 --p 4 --samples 2000 --seed 9");
  auto b = run_cli("mc --word w,r --d1 2 --d2 2 --p 4 --samples 2000 --seed 9");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("blocks: small run reports predictions") {
  auto r = run_cli("blocks --c 1/2 --d2 16 --samples 200 --seed 3");
  REQUIRE(r.exit_code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["p"] == 16);
  CHECK(doc["phi_x1_x2pt_x2pt_x1"]["prediction"]["num"] == "5");
  CHECK(doc["phi_x1_x2_x2_x1"]["prediction"]["num"] == "2");
  CHECK(doc["phi_x1_powers"].size() == 4);
}

TEST_CASE("selftest passes") {
  auto r = run_cli("selftest");
  CHECK(r.exit_code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["passed"] == true);
}

TEST_CASE("JSON output round-trips byte-identically") {
  for (const char* args : {"exact --word w,l,r --d1 2 --d2 3 --p 5",
                           "mc --word w,w --d1 2 --d2 2 --p 4 --samples 2000 --seed 1",
                           "laws --law semicircle --c 1/2 --max-n 4 --density-points 8"}) {
    auto r = run_cli(args);
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc.dump(2) + "\n" == r.out);
  }
}

TEST_CASE("--out writes the document to a file") {
  std::string path = "/tmp/ptw_test_outfile.json";
  auto r = run_cli("exact --word w --d1 2 --d2 2 --p 4 --out " + path);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  auto doc = json::parse(slurp(path));
  CHECK(doc["value"]["num"] == "1");
  std::remove(path.c_str());
}

TEST_CASE("csv is refused for non-tabular commands") {
  auto r = run_cli("exact --word w --d1 2 --d2 2 --p 4 --format csv");
  CHECK(r.exit_code == 2);
}
