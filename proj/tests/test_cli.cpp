#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(GALELAB_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (auto n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

nlohmann::json json_of(const std::string& text) { return nlohmann::json::parse(text.substr(text.find('{'))); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / ("galelab_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

const std::string fixtures = GALELAB_FIXTURES;

}  // namespace

TEST_CASE("cli entropy") {
  auto r = cli("entropy --gen periodic:01 --mode disjoint --lmax 2 --n 10000");
  CHECK(r.code == 0);
  CHECK(json_of(r.out).at("estimate") == 0.0);

  r = cli("entropy --file " + fixtures + "/short.txt --lmax 20");
  CHECK(r.code == 2);
  CHECK(r.out.find("--lmax") != std::string::npos);

  r = cli("entropy --gen nonsense:1");
  CHECK(r.code == 2);
  CHECK(r.out.find("--gen") != std::string::npos);

  r = cli("entropy --file " + fixtures + "/bad_symbol.txt --lmax 1");
  CHECK(r.code == 2);
  CHECK(r.out.find("--file") != std::string::npos);

  r = cli("entropy --gen periodic:01 --checkpoints 100:0.5");
  CHECK(r.code == 2);
  CHECK(r.out.find("--checkpoints") != std::string::npos);
}

TEST_CASE("cli entropy writes reports and a manifest") {
  const auto dir = scratch();
  const auto prefix = (dir / "tm").string();
  auto r = cli("entropy --gen thue_morse --lmax 3 --n 20000 --mode sliding --out " + prefix);
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(slurp(prefix + ".json"));
  CHECK(report.at("manifest") == prefix + ".manifest.json");
  const auto manifest = nlohmann::json::parse(slurp(prefix + ".manifest.json"));
  CHECK(manifest.at("command") == "entropy");
  CHECK(manifest.at("inputs")[0].at("sha256").get<std::string>().size() == 64);
  CHECK(manifest.at("library_version") == "0.1.0");
  CHECK(slurp(prefix + "_l2.csv").rfind("prefix_len,H_value\n", 0) == 0);

  // deterministic apart from the timestamp
  const auto first = slurp(prefix + ".json");
  REQUIRE(cli("entropy --gen thue_morse --lmax 3 --n 20000 --mode sliding --out " + prefix).code == 0);
  CHECK(slurp(prefix + ".json") == first);
}

TEST_CASE("cli construct and gamble") {
  const auto dir = scratch();
  const auto spec = (dir / "p.json").string();
  auto r = cli("construct --gen periodic:01 --n 10000 --l 2 --out " + spec);
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(slurp(spec));
  CHECK(j.at("states").size() == 3);
  CHECK(j.at("k") == 1);

  r = cli("construct --gen periodic:01 --n 10000 --l 2 --mode sliding --out " + spec);
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(slurp(spec)).at("k") == 2);

  r = cli("construct --gen periodic:01 --l 2 --floor 0 --out " + spec);
  CHECK(r.code == 2);
  CHECK(r.out.find("--floor") != std::string::npos);

  r = cli("gamble --spec " + fixtures + "/fair.json --gen bernoulli:1/4:seed1 --n 10000 --s 1");
  CHECK(r.code == 0);
  CHECK(json_of(r.out).at("verdict") == "indeterminate");

  const auto bspec = (dir / "b.json").string();
  REQUIRE(cli("construct --gen bernoulli:1/4:seed42 --n 100000 --l 1 --out " + bspec).code == 0);
  const auto traj = (dir / "traj.csv").string();
  r = cli("gamble --spec " + bspec + " --gen bernoulli:1/4:seed42 --n 100000 --s 0.92 --out " + traj);
  CHECK(r.code == 0);
  CHECK(json_of(r.out).at("verdict") == "winning");
  CHECK(slurp(traj).rfind("prefix_len,log2_capital\n", 0) == 0);

  r = cli("gamble --spec " + bspec + " --gen periodic:01 --s -1");
  CHECK(r.code == 2);
  CHECK(r.out.find("--s") != std::string::npos);
}

TEST_CASE("cli verify") {
  auto r = cli("verify --suite kraft --trials 20 --seed 7");
  CHECK(r.code == 0);
  CHECK(json_of(r.out).at("passed") == true);

  r = cli("verify --suite gale --spec " + fixtures + "/tampered_gale.json");
  CHECK(r.code == 1);
  CHECK(json_of(r.out).contains("counterexample"));

  r = cli("verify --suite gale --spec " + fixtures + "/fair.json");
  CHECK(r.code == 0);

  r = cli("verify --suite bogus");
  CHECK(r.code == 2);
}

TEST_CASE("cli equiv") {
  auto r = cli("equiv --gen periodic:0 --lmax 3 --n 10000");
  CHECK(r.code == 0);
  const auto j = json_of(r.out);
  CHECK(j.at("disjoint") == 0.0);
  CHECK(j.at("sliding") == 0.0);
}
