#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using std::numbers::pi;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(UMAX_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

fs::path sandbox() {
  const fs::path dir = fs::temp_directory_path() / "umax_cli_test";
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const std::string& name, const json& cfg) {
  const fs::path path = sandbox() / name;
  std::ofstream out(path);
  out << cfg.dump(2);
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json base_perimeter_config() {
  return json{{"kernel", {{"name", "perimeter"}, {"m", 3}}},
              {"density", {{"family", "uniform"}}},
              {"master_seed", 42}};
}

}  // namespace

TEST_CASE("analyze: perimeter report carries c = 2/(9pi)") {
  const fs::path cfg = write_config("analyze.json", base_perimeter_config());
  const fs::path out = sandbox() / "analyze_out";
  const RunResult res = run_cli("analyze --config " + cfg.string() + " --out " + out.string());
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(slurp(out / "analysis.json"));
  const double c = report["result"]["limit_law"]["coefficient"].get<double>();
  CHECK(std::abs(c - 2.0 / (9 * pi)) <= 1e-8 * (2.0 / (9 * pi)));
  CHECK(report["result"]["conditions"]["a4_interior"].get<bool>());
  CHECK(report["config"]["master_seed"].get<std::uint64_t>() == 42);
}

TEST_CASE("analyze: inverse distances at m = 5 report the paper determinant") {
  json cfg = json{{"kernel", {{"name", "inverse-distance"}, {"m", 5}}},
                  {"density", {{"family", "uniform"}}},
                  {"mode", "u-min"},
                  {"master_seed", 7}};
  const fs::path path = write_config("analyze_inv.json", cfg);
  const fs::path out = sandbox() / "analyze_inv_out";
  const RunResult res = run_cli("analyze --config " + path.string() + " --out " + out.string());
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(slurp(out / "analysis.json"));
  const double det =
      report["result"]["ordered_maximizers"][0]["det_neg_hessian_analytic"].get<double>();
  const double expected = (21847 + 7395 * std::sqrt(5.0)) / 3200;  // ~11.9946
  CHECK(std::abs(det - expected) <= 1e-3);
  CHECK(report["result"]["conditions"]["diagonally_dominant"].get<bool>());
}

TEST_CASE("analyze: boundary maximum exits with the condition code") {
  json cfg = json{{"kernel",
                   {{"name", "generalized-perimeter"}, {"m", 6}, {"y", 1.5}}},
                  {"density", {{"family", "uniform"}}}};
  const fs::path path = write_config("analyze_boundary.json", cfg);
  const RunResult res =
      run_cli("analyze --config " + path.string() + " --out " + (sandbox() / "b_out").string());
  CHECK(res.exit_code == 3);
  const json err = json::parse(res.out);
  CHECK(err["error"]["code"].get<std::string>() == "boundary-maximum");
}

TEST_CASE("simulate: byte-identical reruns, thread-count independent") {
  json cfg = base_perimeter_config();
  cfg["n"] = 40;
  cfg["replicates"] = 50;
  cfg["evaluator"] = "auto";
  const fs::path path = write_config("simulate.json", cfg);
  const fs::path out1 = sandbox() / "sim1";
  const fs::path out2 = sandbox() / "sim2";
  REQUIRE(run_cli("simulate --config " + path.string() + " --out " + out1.string()).exit_code == 0);
  REQUIRE(run_cli("simulate --config " + path.string() + " --out " + out2.string() +
                  " --threads 4")
              .exit_code == 0);
  CHECK(slurp(out1 / "simulation.json") == slurp(out2 / "simulation.json"));
  CHECK(slurp(out1 / "ecdf.csv") == slurp(out2 / "ecdf.csv"));
  const json report = json::parse(slurp(out1 / "simulation.json"));
  CHECK(report["result"]["ks_distance"].get<double>() >= 0.0);
}

TEST_CASE("simulate: zero replicates is a config error") {
  json cfg = base_perimeter_config();
  cfg["n"] = 30;
  cfg["replicates"] = 0;
  const fs::path path = write_config("simulate_zero.json", cfg);
  CHECK(run_cli("simulate --config " + path.string() + " --out " +
                (sandbox() / "z_out").string())
            .exit_code == 2);
}

TEST_CASE("unknown config keys are rejected") {
  json cfg = base_perimeter_config();
  cfg["surprise"] = 1;
  const fs::path path = write_config("unknown_key.json", cfg);
  const RunResult res =
      run_cli("analyze --config " + path.string() + " --out " + (sandbox() / "u_out").string());
  CHECK(res.exit_code == 2);
  const json err = json::parse(res.out);
  CHECK(err["error"]["code"].get<std::string>() == "config");
}

TEST_CASE("bound: t = 0 rows carry empty tails; tau columns match the degree") {
  json cfg = json{{"kernel", {{"name", "pairwise-distance"}, {"m", 4}}},
                  {"density", {{"family", "uniform"}}},
                  {"t", 0.0},
                  {"n_grid", {8, 12}},
                  {"mc_samples", 20000},
                  {"master_seed", 5}};
  const fs::path path = write_config("bound.json", cfg);
  const fs::path out = sandbox() / "bound_out";
  const RunResult res = run_cli("bound --config " + path.string() + " --out " + out.string());
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(slurp(out / "bound.json"));
  for (const json& row : report["result"]["rows"]) {
    CHECK(row["lambda_hat"].get<double>() == 0.0);
    CHECK(row["p_hat"].get<double>() == 0.0);
  }
  const std::string csv = slurp(out / "diagnostics.csv");
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header.find("tau_1") != std::string::npos);
  CHECK(header.find("tau_2") != std::string::npos);
  CHECK(header.find("tau_3") != std::string::npos);
  CHECK(header.find("tau_4") == std::string::npos);
}

TEST_CASE("bound: reruns are byte-identical") {
  json cfg = base_perimeter_config();
  cfg["t"] = 1.0;
  cfg["n_grid"] = {8, 10};
  cfg["mc_samples"] = 40000;
  const fs::path path = write_config("bound_det.json", cfg);
  const fs::path out1 = sandbox() / "bdet1";
  const fs::path out2 = sandbox() / "bdet2";
  REQUIRE(run_cli("bound --config " + path.string() + " --out " + out1.string()).exit_code == 0);
  REQUIRE(run_cli("bound --config " + path.string() + " --out " + out2.string() +
                  " --threads 3")
              .exit_code == 0);
  CHECK(slurp(out1 / "bound.json") == slurp(out2 / "bound.json"));
  CHECK(slurp(out1 / "diagnostics.csv") == slurp(out2 / "diagnostics.csv"));
}

TEST_CASE("--seed overrides the config seed and lands in the audit trail") {
  json cfg = base_perimeter_config();
  cfg["n"] = 20;
  cfg["replicates"] = 10;
  const fs::path path = write_config("seed_override.json", cfg);
  const fs::path out = sandbox() / "seed_out";
  REQUIRE(run_cli("simulate --config " + path.string() + " --out " + out.string() +
                  " --seed 777")
              .exit_code == 0);
  const json report = json::parse(slurp(out / "simulation.json"));
  CHECK(report["config"]["master_seed"].get<std::uint64_t>() == 777);
}

TEST_CASE("missing config file is a config error") {
  CHECK(run_cli("analyze --config /nonexistent.json").exit_code == 2);
}

TEST_CASE("custom generator through the full schema") {
  json cfg = json{{"kernel",
                   {{"family", "gap-sum"},
                    {"generator", {{"family", "pow-sin"}, {"y", 0.5}}},
                    {"m", 4}}},
                  {"density", {{"family", "von-mises"}, {"mu", 0.0}, {"kappa", 0.5}}},
                  {"master_seed", 3}};
  const fs::path path = write_config("custom_gen.json", cfg);
  const fs::path out = sandbox() / "custom_out";
  const RunResult res = run_cli("analyze --config " + path.string() + " --out " + out.string());
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(slurp(out / "analysis.json"));
  CHECK(report["result"]["limit_law"]["coefficient"].get<double>() > 0.0);
}
