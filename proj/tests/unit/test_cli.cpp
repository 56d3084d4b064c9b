#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "naimark_lab/commands.hpp"

using namespace naimark_lab;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "naimark-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixture(const std::string& name) { return std::string(NAIMARK_LAB_FIXTURES) + "/" + name; }

nlohmann::json machine(std::vector<std::string> args) {
  args.push_back("--format");
  args.push_back("machine");
  const Run r = invoke(args);
  return nlohmann::json::parse(r.out);
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("validate exit codes") {
  CHECK(invoke({"validate", fixture("unsharp_pair.json")}).code == 0);
  const Run incomplete = invoke({"validate", fixture("incomplete.json")});
  CHECK(incomplete.code == 1);
  CHECK(incomplete.out.find("completeness") != std::string::npos);
  const Run malformed = invoke({"validate", fixture("malformed.json")});
  CHECK(malformed.code == 2);
  CHECK(malformed.err.find("observables[0].effects[1][1][1][0]") != std::string::npos);
  CHECK(invoke({"validate", fixture("missing.json")}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"validate", fixture("unsharp_pair.json"), "--format", "xml"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);

  const auto body = machine({"validate", fixture("unsharp_pair.json")});
  CHECK(body["schema"] == "naimark-lab.validate/1");
  CHECK(body["valid"] == true);
}

TEST_CASE("check verdicts") {
  const auto pair = machine({"check", fixture("unsharp_pair.json"), "--seed", "3"});
  CHECK(pair["schema"] == "naimark-lab.check/1");
  CHECK(pair["verdict"] == "compatible");
  CHECK(pair["methods"]["oracle"]["status"] == "feasible");
  CHECK(pair["methods"]["w_search"]["status"] == "compatible");
  CHECK(pair["methods"]["w_search"].contains("witness"));

  const auto far = machine({"check", fixture("incompatible_pair.json"), "--restarts", "3", "--budget", "1500"});
  CHECK(far["verdict"] == "incompatible");
  CHECK(far["methods"]["oracle"]["status"] == "infeasible");
  CHECK(far["methods"]["w_search"]["status"] == "inconclusive");
  CHECK(invoke({"check", fixture("incompatible_pair.json"), "--method", "oracle"}).code == 0);

  const Run invalid = invoke({"check", fixture("incomplete.json")});
  CHECK(invalid.code == 1);
  CHECK(invoke({"check", fixture("unsharp_pair.json"), "--method", "guess"}).code == 2);

  const auto trio = machine({"check", fixture("trio.json"), "--method", "oracle"});
  CHECK(trio["verdict"] == "compatible");
  CHECK_FALSE(trio["methods"].contains("w_search"));
}

TEST_CASE("check is reproducible under a seed") {
  const std::vector<std::string> args{"check", fixture("unsharp_pair.json"), "--method", "g-estimate", "--format",
                                      "machine", "--restarts", "2", "--budget", "500"};
  auto with_seed = args;
  with_seed.insert(with_seed.end(), {"--seed", "17"});
  const std::string a = invoke(with_seed).out;
  CHECK(a == invoke(with_seed).out);

  ::setenv("NAIMARK_LAB_SEED", "17", 1);
  const std::string from_env = invoke(args).out;
  ::unsetenv("NAIMARK_LAB_SEED");
  CHECK(from_env == a);
  CHECK(nlohmann::json::parse(a)["seed"] == 17);
}

TEST_CASE("naimark subcommand") {
  const auto pair = machine({"naimark", fixture("unsharp_pair.json"), "--observable", "Sx"});
  CHECK(pair["schema"] == "naimark-lab.naimark/1");
  CHECK(pair["passed"] == true);
  CHECK(pair["max_delta"].get<double>() <= 1e-10);

  const auto trio = machine({"naimark", fixture("trio_joint.json")});
  CHECK(trio["extended_dim"] == 16);
  CHECK(trio["passed"] == true);

  CHECK(invoke({"naimark", fixture("unsharp_pair.json")}).code == 2);
  CHECK(invoke({"naimark", fixture("unsharp_pair.json"), "--observable", "Sq"}).code == 2);

  const auto out = std::filesystem::temp_directory_path() / "naimark_lab_cli_extension.json";
  CHECK(invoke({"naimark", fixture("sharp_z.json"), "--out", out.string()}).code == 0);
  CHECK(invoke({"validate", out.string()}).code == 0);
  std::filesystem::remove(out);
}

TEST_CASE("region CSV") {
  const Run r = invoke({"region", "--grid", "11", "--restarts", "2", "--budget", "800", "--seed", "5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind(std::string(cli::kRegionCsvHeader) + "\n", 0) == 0);
  CHECK(count_lines(r.out) == 122);
  CHECK(r.out.find("\n0,0,compatible,compatible,compatible,") != std::string::npos);
  CHECK(r.out.find("\n1,1,inconclusive,incompatible,incompatible,") != std::string::npos);

  const Run again = invoke({"region", "--grid", "11", "--restarts", "2", "--budget", "800", "--seed", "5",
                            "--threads", "3"});
  CHECK(again.out == r.out);

  const auto out = std::filesystem::temp_directory_path() / "naimark_lab_cli_region.csv";
  const auto summary = machine({"region", "--grid", "5", "--axes", "y,z", "--out", out.string()});
  CHECK(summary["rows"] == 25);
  CHECK(summary["disagreements_outside_band"] == 0);
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(count_lines(ss.str()) == 26);
  std::filesystem::remove(out);

  CHECK(invoke({"region", "--axes", "x"}).code == 2);
  CHECK(invoke({"region", "--axes", "x,w"}).code == 2);
  CHECK(invoke({"region", "--grid", "1"}).code == 2);
}

TEST_CASE("examples subcommand") {
  const Run r = invoke({"examples"});
  CHECK(r.code == 0);
  CHECK(r.out.find("all checks passed") != std::string::npos);
  const auto one = machine({"examples", "--which", "3"});
  CHECK(one["schema"] == "naimark-lab.examples/1");
  CHECK(one["passed"] == true);
  CHECK(invoke({"examples", "--which", "5"}).code == 2);
}

TEST_CASE("format_double reads back exactly") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -0.0})
    CHECK(std::stod(cli::format_double(v)) == v);
  CHECK(cli::format_double(0.5) == "0.5");
}
