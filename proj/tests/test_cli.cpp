#include "fracstab/commands.hpp"
#include "fracstab/dynamics.hpp"
#include "fracstab/io.hpp"
#include "fracstab/parallel.hpp"
#include "fracstab/stability.hpp"

#include <doctest.h>
#include <json.hpp>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace fracstab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fracstab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / ("fracstab_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

CsvTable read_file(const fs::path& p) {
  std::ifstream in(p);
  return read_csv(in);
}

}  // namespace

TEST_CASE("classify prints a JSON verdict") {
  auto r = cli({"classify", "--alpha", "1.9", "--beta", "0.2", "--a", "2", "--b", "2.168-0.7312i"});
  REQUIRE(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "Unstable");
  CHECK(j.contains("winding"));
  CHECK(j["min_distance"].get<double>() > 0.0);
  CHECK(j["params"]["a"] == 2.0);

  r = cli({"classify", "--alpha", "1.9", "--beta", "0.2", "--a", "3.24901", "--b", "0.7"});
  CHECK(nlohmann::json::parse(r.out)["verdict"] == "Stable");
  r = cli({"classify", "--alpha", "1.9", "--beta", "0.2", "--a", "3.79051", "--b", "-0.08687-0.9862i"});
  CHECK(nlohmann::json::parse(r.out)["verdict"] == "Unstable");
  r = cli({"classify", "--one-term", "--alpha", "0.55", "--N", "1", "--c", "0.982+0.4906i"});
  CHECK(nlohmann::json::parse(r.out)["verdict"] == "Stable");
}

TEST_CASE("simulate writes a trajectory and a verdict") {
  auto r = cli({"simulate", "--alpha", "1.8", "--beta", "0.5", "--a", "1", "--b", "0.3", "--x0", "0.1", "--x1", "0.2"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("# verdict=ConvergedToZero") != std::string::npos);
  r = cli({"simulate", "--alpha", "1.8", "--beta", "0.5", "--a", "1", "--b", "1.1", "--x0", "0.1", "--x1", "0.2",
           "--steps", "2000"});
  CHECK(r.out.find("# verdict=Unbounded") != std::string::npos);
  r = cli({"simulate", "--one-term", "--alpha", "5.3", "--N", "6", "--c", "1.948+0.06482i", "--init",
           "0.1,0.2,0.3,0.4,0.5,0.6"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("# verdict=Unbounded") != std::string::npos);
}

TEST_CASE("interval, bifurcations and logistic") {
  auto r = cli({"interval", "--alpha", "1.8", "--beta", "0.5", "--a", "3"});
  REQUIRE(r.code == kExitOk);
  double l = 0, rt = 0;
  REQUIRE(std::sscanf(r.out.c_str(), "(%lf, %lf)", &l, &rt) == 2);
  CHECK(std::abs(l - -0.464274) < 1e-5);
  CHECK(std::abs(rt - 0.239562) < 1e-5);
  CHECK(cli({"interval", "--alpha", "1.8", "--beta", "0.5", "--a", "4"}).out == "empty\n");
  r = cli({"interval", "--one-term", "--alpha", "0.55", "--format", "json"});
  CHECK(nlohmann::json::parse(r.out)["left"].get<double>() == 1.0 - std::exp2(0.55));

  r = cli({"bifurcations", "--alpha", "1.2", "--beta", "0.8", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j["a1"].get<double>() - 1.31951) < 1e-5);
  CHECK(std::abs(j["a2"].get<double>() - 3.07885) < 1e-5);

  r = cli({"logistic", "--alpha", "1.2", "--beta", "0.8", "--a", "0.5", "--mu", "2.2", "--steps", "1000"});
  REQUIRE(r.code == kExitOk);
  const auto at = r.out.find("value=");
  REQUIRE(at != std::string::npos);
  CHECK(r.out.find("verdict=ConvergedTo ") != std::string::npos);
  CHECK(std::abs(std::stod(r.out.substr(at + 6)) - 0.5455) < 1e-3);
}

TEST_CASE("boundary CSV and SVG") {
  const fs::path d = scratch_dir();
  auto r = cli({"boundary", "--one-term", "--alpha", "0.55", "--N", "1", "-o", (d / "b.csv").string()});
  REQUIRE(r.code == kExitOk);
  const CsvTable t = read_file(d / "b.csv");
  CHECK(t.config().at("alpha") == "0.55");
  const auto re = t.column("re"), im = t.column("im");
  double lo = 1e9, hi = -1e9;
  for (const auto& row : t.rows) {
    if (std::abs(row[im]) < 1e-12) {
      lo = std::min(lo, row[re]);
      hi = std::max(hi, row[re]);
    }
  }
  CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lo == doctest::Approx(1.0 - std::exp2(0.55)).epsilon(1e-12));

  r = cli({"boundary", "--alpha", "1.9", "--beta", "0.2", "--a", "2", "--svg", (d / "out.svg").string(), "--fill",
           "--fill-grid", "60"});
  REQUIRE(r.code == kExitOk);
  std::ifstream svg(d / "out.svg");
  const std::string s((std::istreambuf_iterator<char>(svg)), {});
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("fill-opacity=\"0.4\"") != std::string::npos);

  // at a1 the locus closes on itself on the real axis
  r = cli({"boundary", "--alpha", "1.9", "--beta", "0.2", "--a", "3.24901", "-o", (d / "a1.csv").string()});
  const CsvTable ta = read_file(d / "a1.csv");
  const auto th = ta.column("theta");
  for (const auto& row : ta.rows) {
    if (row[th] == std::numbers::pi) {
      CHECK(std::abs(row[ta.column("re")] - 1.0) < 1e-4);
    }
  }
  fs::remove_all(d);
}

TEST_CASE("simulate CSV round trips through the parser") {
  const fs::path d = scratch_dir();
  auto r = cli({"simulate", "--alpha", "1.9", "--beta", "0.2", "--a", "2", "--b", "1.891-0.624i", "--steps", "300",
                "-o", (d / "t.csv").string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("verdict=ConvergedToZero", 0) == 0);
  const CsvTable t = read_file(d / "t.csv");
  CHECK(t.config().at("b") == "1.891-0.624i");
  CHECK(t.config().at("command") == "simulate");
  const auto direct = simulate_two_term(TwoTermSystem{{1.9, 0.2}, 2.0, LinearForcing{{1.891, -0.624}}}, 0.1, 0.2, 300);
  const auto back = trajectory_values(t);
  REQUIRE(back.size() == direct.values.size());
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == direct.values[i]);
  fs::remove_all(d);
}

TEST_CASE("exit codes") {
  CHECK(cli({"classify", "--alpha", "2.5", "--beta", "0.2", "--a", "2", "--b", "1"}).code == kExitInvalid);
  CHECK(cli({"classify", "--alpha", "1.9", "--beta", "0.2", "--a", "2"}).code == kExitInvalid);
  CHECK(cli({"classify", "--alpha", "1.9", "--beta", "0.2", "--a", "2", "--b", "nonsense"}).code == kExitInvalid);
  CHECK(cli({"simulate", "--alpha", "1.9", "--beta", "0.2", "--a", "2", "--b", "1", "--steps", "5"}).code ==
        kExitInvalid);
  CHECK(cli({"interval", "--alpha", "1.9", "--beta", "0.2", "--a", "-1"}).code == kExitInvalid);
  CHECK(cli({"bogus"}).code == kExitInvalid);
  CHECK(cli({"boundary", "--alpha", "1.9", "--beta", "0.2", "--a", "2", "--resolution", "100"}).code == kExitInvalid);
  CHECK(cli({"boundary", "--alpha", "1.9", "--beta", "0.2", "--a", "2", "-o", "/nonexistent-dir/x.csv"}).code ==
        kExitIo);
  CHECK(cli({"--config", "/nonexistent-dir/cfg.ini", "bifurcations", "--alpha", "1.9", "--beta", "0.2"}).code ==
        kExitIo);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("flags override the config file, which overrides defaults") {
  const fs::path d = scratch_dir();
  {
    std::ofstream cfg(d / "run.ini");
    cfg << "alpha=1.8\nbeta=0.5\na=1\nb=0.3\nsteps=50\n";
  }
  auto r = cli({"--config", (d / "run.ini").string(), "simulate", "--steps", "80", "-o", (d / "t.csv").string()});
  REQUIRE(r.code == kExitOk);
  const CsvTable t = read_file(d / "t.csv");
  const auto c = t.config();
  CHECK(c.at("steps") == "80");
  CHECK(c.at("alpha") == "1.8");
  CHECK(c.at("tol") == "0.001");
  CHECK(t.rows.size() == 81);
  fs::remove_all(d);
}

TEST_CASE("atlas rows match real_interval") {
  auto r = cli({"atlas", "--alpha", "1.8", "--beta", "0.5", "--a-min", "0.5", "--a-step", "0.5", "--jobs", "2"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  const CsvTable t = read_csv(in);
  REQUIRE(t.rows.size() == 7);
  for (const auto& row : t.rows) {
    const auto iv = real_interval({1.8, 0.5}, row[0]);
    REQUIRE(iv);
    CHECK(row[1] == iv->left);
    CHECK(row[2] == iv->right);
  }
}

TEST_CASE("FRACSTAB_JOBS is the fallback worker count") {
  ::setenv("FRACSTAB_JOBS", "3", 1);
  CHECK(resolve_jobs(std::nullopt) == 3u);
  CHECK(resolve_jobs(5u) == 5u);
  ::setenv("FRACSTAB_JOBS", "junk", 1);
  CHECK(resolve_jobs(std::nullopt) >= 1u);
  ::unsetenv("FRACSTAB_JOBS");
}

TEST_CASE("reproduce-paper writes a passing report") {
  const fs::path d = scratch_dir() / "report";
  const auto r = cli({"reproduce-paper", "--out", d.string(), "--jobs", "2"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("FAIL") == std::string::npos);
  std::ifstream in(d / "report.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j["all_passed"] == true);
  CHECK(j["checks"].size() > 40);
  const CsvTable t = read_file(d / "a_star.csv");
  CHECK(t.rows.size() == 6);
  for (const auto& row : t.rows) CHECK(row[t.column("agree")] == 1.0);
  fs::remove_all(d.parent_path());
}
