#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ffd/cli.hpp"
#include "ffd/criteria.hpp"

namespace {

const std::string kData = FFD_DATA_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ffd::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("ffd_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("criteria ranges expand") {
  const auto v = ffd::cli::expand_criteria({"bs", "sf0:f=1..3", "s31"});
  CHECK(v == std::vector<std::string>{"bs", "sf0:f=1", "sf0:f=2", "sf0:f=3", "s31"});
}

TEST_CASE("eval prints the six criterion values of the 12-run design") {
  const auto r = run({"eval", kData + "/table1.txt", "--criteria", "s31", "sf0:f=1..5"});
  REQUIRE(r.code == 0);
  for (const char* v : {"16/9", "5/9", "49/54", "4/3", "11/6", "65/27", "1.77778", "0.555556"})
    CHECK_MESSAGE(r.out.find(v) != std::string::npos, v);
}

TEST_CASE("eval json round-trips through the echoed design") {
  const auto first = run({"eval", kData + "/table1.txt", "--criteria", "bs", "gma", "afd", "s31", "sFg:g=1",
                          "dfg:s31", "--format", "json"});
  REQUIRE(first.code == 0);
  const auto doc = nlohmann::json::parse(first.out);
  CHECK(doc["runs"] == 12);
  CHECK(doc["afd"] == true);
  CHECK(doc["affine_dimension"] == 5);
  CHECK(doc["bs"][1]["num"] == "5");
  CHECK(doc["bs"][1]["den"] == "36");
  CHECK(doc["gma_key"][1] == "0");
  CHECK(doc["gma_key"][2] == "5/18");
  CHECK(doc["criteria"][2]["criterion"] == "dfg:s31");
  CHECK(doc["criteria"][2]["value"]["num"] == "4096");
  CHECK(doc["criteria"][2]["provenance"] == "oracle");

  std::string echoed;
  for (const auto& row : doc["design"]) {
    for (const auto& v : row) echoed += std::to_string(v.get<int>()) + " ";
    echoed += "\n";
  }
  const auto path = temp_file("echo.txt", echoed);
  const auto second = run({"eval", path, "--criteria", "bs", "gma", "afd", "s31", "sFg:g=1", "dfg:s31",
                           "--format", "json"});
  REQUIRE(second.code == 0);
  CHECK(nlohmann::json::parse(second.out) == doc);
}

TEST_CASE("full factorial has a zero spectrum") {
  const auto r = run({"eval", kData + "/full_factorial_2.txt", "--criteria", "bs", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["bs"][0]["num"] == "1");
  CHECK(doc["bs"][1]["num"] == "0");
  CHECK(doc["bs"][2]["num"] == "0");
}

TEST_CASE("Hadamard design file") {
  const auto r = run({"eval", kData + "/hadamard_12x5.txt", "--criteria", "afd", "bs"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("affinely full-dimensional: yes") != std::string::npos);
  CHECK(r.out.find("10/9") != std::string::npos);
  CHECK(r.out.find("1.11111") != std::string::npos);
}

TEST_CASE("zero-one input") {
  const auto path = temp_file("zo.txt", "1 1\n0 1\n1 0\n0 0\n");
  const auto r = run({"eval", path, "--zero-one", "--criteria", "bs", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["bs"][1]["num"] == "0");
}

TEST_CASE("usage and parse errors exit with 1") {
  const auto bad = temp_file("bad.txt", "1 1\n1 -1 1\n");
  auto r = run({"eval", bad});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(run({"eval", kData + "/missing.txt"}).code == 1);
  CHECK(run({"eval", kData + "/full_factorial_2.txt", "--criteria", "s31"}).code == 1);
  CHECK(run({"eval", kData + "/table1.txt", "--criteria", "sf0:f=11"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"search", "--method", "annealing"}).code == 1);
  CHECK(run({"search", "--runs", "12", "--factors", "5", "--method", "exhaustive"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("oracle verdicts") {
  auto r = run({"oracle", kData + "/table1.txt", "--scenario", "s31"});
  CHECK(r.code == 0);
  CHECK(r.out.find("EQUAL") != std::string::npos);
  CHECK(r.out.find("16/9") != std::string::npos);

  r = run({"oracle", kData + "/table1.txt", "--scenario", "sf0:f=2", "sFg:g=1", "consistent:f=3,g=1", "--format",
           "json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["results"][0]["verdict"] == "EQUAL");
  CHECK(doc["results"][1]["verdict"] == "EQUAL");
  CHECK(doc["results"][2]["verdict"] == "ORACLE-ONLY");

  r = run({"oracle", kData + "/full_factorial_2.txt", "--scenario", "sf0:f=1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("closed form 0, oracle 0") != std::string::npos);

  const auto weights = temp_file("w.txt", "1/3 : {1,2} | \n2/3 : {1,2} {1,3} {2,3} | {1,2,3}\n");
  r = run({"oracle", kData + "/table1.txt", "--scenario", "explicit:" + weights});
  CHECK(r.code == 0);
  CHECK(r.out.find("no closed form") != std::string::npos);

  r = run({"oracle", kData + "/table1.txt", "--scenario", "sf0:f=5", "--cap", "10"});
  CHECK(r.code == 1);
  CHECK(r.err.find("support points") != std::string::npos);
}

TEST_CASE("search output") {
  auto r = run({"search", "--runs", "4", "--factors", "2", "--criterion", "sf0:f=1", "--method", "exhaustive"});
  CHECK(r.code == 0);
  CHECK(r.out.find("best value 0 = 0") != std::string::npos);

  const std::vector<std::string> args{"search", "--runs", "12", "--factors", "4", "--criterion", "sf0:f=1",
                                      "--method", "exhaustive", "--format", "json", "--no-timing"};
  r = run(args);
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["value"]["num"] == "4");
  CHECK(doc["value"]["den"] == "9");
  CHECK_FALSE(doc.contains("seconds"));
  CHECK(run(args).out == r.out);
}

TEST_CASE("search is byte-stable for a seed") {
  const std::vector<std::string> args{"search", "--runs",   "12",   "--factors", "5",      "--criterion",
                                      "s31",    "--restarts", "8", "--seed",    "7",      "--format",
                                      "json",   "--no-timing"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto with_workers = args;
  with_workers.insert(with_workers.end(), {"--workers", "3"});
  CHECK(run(with_workers).out == a.out);
}

TEST_CASE("verify") {
  auto r = run({"verify", "--afd", "--exhaustive-m", "3", "--samples", "20"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0 disagreements") != std::string::npos);

  r = run({"verify", "--oracle", "--samples", "3", "--seed", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("3/3 EQUAL") != std::string::npos);

  r = run({"verify", "--props", "--m", "4..8"});
  bool all_hold = true;
  for (int p = 1; p <= 3; ++p) all_hold = all_hold && ffd::check_proposition(p, p == 2 ? 6 : 4, 8).holds();
  CHECK(r.code == (all_hold ? 0 : 2));
  CHECK(r.out.find("proposition 1 (m = 4..8)") != std::string::npos);

  CHECK(run({"verify", "--afd", "--exhaustive-m", "6"}).code == 1);
}
