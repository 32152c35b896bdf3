#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "cpa_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  const fs::path dir = scratch_dir();
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(CPA_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST_CASE("susceptibility null prints a clean zero") {
  const RunResult r = run_cli("chi --delta-p 0 --intensity 0 --variant reduced --r 0");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "chi = 0+0i\n");
}

TEST_CASE("two-level thresholds print the band edges") {
  const RunResult r = run_cli("cpa-threshold --variant two-level --r 0");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("-7.05336798996") != std::string::npos);
  CHECK(r.out.find("\n7.05336798996") != std::string::npos);
}

TEST_CASE("inverse frequency lookup returns the symmetric pair") {
  const RunResult r = run_cli("cpa-frequencies --variant two-level --iin 9.375");
  CHECK(r.exit_code == 0);
  std::istringstream in(r.out);
  double a = 0.0, b = 0.0;
  in >> a >> b;
  CHECK(a == doctest::Approx(-7.0).epsilon(1e-9));
  CHECK(b == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("chi --no-such-flag 3").exit_code == 1);
  CHECK(run_cli("no-such-command").exit_code == 1);
  CHECK(run_cli("cpa-point --delta-p 5 --variant two-level --omega1 1").exit_code == 1);
  CHECK(run_cli("cpa-point --delta-p 5 --variant two-level-bare --r 0.5").exit_code == 1);
  CHECK(run_cli("figure not-a-preset").exit_code == 1);
  // omega1 = 0 with branching decay has no closed form: domain error.
  CHECK(run_cli("cpa-point --delta-p 5 --omega1 0").exit_code == 1);
}

TEST_CASE("repeated runs are byte-identical") {
  const fs::path dir = scratch_dir();
  const fs::path a = dir / "a.csv";
  const fs::path b = dir / "b.csv";
  const std::string args = "curve --delta-p 7 --omega1 2.5 --iin-max 300 --points 400 --out ";
  REQUIRE(run_cli(args + a.string()).exit_code == 0);
  REQUIRE(run_cli(args + b.string()).exit_code == 0);
  const std::string content = slurp(a);
  CHECK(!content.empty());
  CHECK(content == slurp(b));
  CHECK(content.rfind("delta_p_over_Gamma,i_in,i_out,intensity,stable", 0) == 0);

  const fs::path figs1 = dir / "figs1";
  const fs::path figs2 = dir / "figs2";
  REQUIRE(run_cli("figure fig3a --out " + figs1.string()).exit_code == 0);
  REQUIRE(run_cli("figure fig3a --out " + figs2.string()).exit_code == 0);
  CHECK(slurp(figs1 / "fig3a.csv") == slurp(figs2 / "fig3a.csv"));
}

TEST_CASE("json output parses and mirrors the csv data") {
  const RunResult r = run_cli("cpa-point --delta-p 7 --variant two-level --format json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["delta_p"].get<double>() == doctest::Approx(7.0));
  CHECK(j["intensity_intracavity"].get<double>() == doctest::Approx(937.5));
  CHECK(j["feasible"].get<bool>());

  const RunResult m = run_cli(
      "map --variant two-level --dp-min -1 --dp-max 1 --dp-steps 3 "
      "--iin-min 0.5 --iin-max 1.5 --iin-steps 2 --format json");
  CHECK(m.exit_code == 0);
  const auto arr = nlohmann::json::parse(m.out);
  CHECK(arr.is_array());
  CHECK(arr.size() == 6);
}

TEST_CASE("config file sets parameters and flags override it") {
  const fs::path dir = scratch_dir();
  const fs::path cfg = dir / "config.json";
  {
    std::ofstream out(cfg);
    out << R"({"system": {"omega1": 1.0, "r_pump": 0.0}, "variant": "reduced",
               "drive": {"delta_p": 0.0}})";
  }
  const RunResult r = run_cli("chi --intensity 0 --config " + cfg.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out == "chi = 0+0i\n");

  // Flag overrides the config detuning: response is no longer null.
  const RunResult s = run_cli("chi --intensity 0 --delta-p 2 --config " + cfg.string());
  CHECK(s.exit_code == 0);
  CHECK(s.out != "chi = 0+0i\n");

  {
    std::ofstream out(cfg);
    out << R"({"system": {"omega1": 1.0}, "mystery": 3})";
  }
  CHECK(run_cli("chi --intensity 0 --config " + cfg.string()).exit_code == 1);
}

TEST_CASE("oracle subcommand confirms a single-valued point") {
  const RunResult r =
      run_cli("oracle --variant two-level --delta-p 2 --iin 0.5");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("confirmed 1/1") != std::string::npos);
}

TEST_CASE("hysteresis subcommand reports the jumps") {
  const fs::path dir = scratch_dir();
  const fs::path data = dir / "hyst.csv";
  const RunResult r = run_cli(
      "hysteresis --variant two-level --delta-p 6 --iin-min 100 --iin-max 2200 "
      "--steps 400 --out " + data.string());
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("jump_up") != std::string::npos);
  CHECK(slurp(data).rfind("direction_down,i_in,i_out", 0) == 0);
}
