// Batch front-end: analyze | simulate | bound subcommands over a JSON config,
// producing deterministic JSON/CSV reports.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "umax/umax.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using namespace umax;

// ---------------------------------------------------------------------------
// Config parsing. Unknown keys are rejected so typos cannot silently fall
// back to defaults.

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.contains(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw ConfigError("missing numeric key '" + key + "' in " + where);
  return obj[key].get<double>();
}

Generator parse_generator(const json& spec) {
  check_keys(spec, {"family", "y", "a", "b", "c", "values"}, "kernel.generator");
  if (!spec.contains("family")) throw ConfigError("generator needs a 'family'");
  const std::string family = spec["family"].get<std::string>();
  if (family == "sin-half") return Generator::sin_half();
  if (family == "half-sin") return Generator::half_sin();
  if (family == "sec-half") return Generator::sec_half();
  if (family == "csc-half") return Generator::csc_half();
  if (family == "pow-sin") return Generator::pow_sin(require_number(spec, "y", "generator"));
  if (family == "alexander-stolarsky")
    return Generator::alexander_stolarsky(require_number(spec, "a", "generator"),
                                          require_number(spec, "b", "generator"),
                                          static_cast<int>(require_number(spec, "c", "generator")));
  if (family == "tabulated") {
    if (!spec.contains("values") || !spec["values"].is_array())
      throw ConfigError("tabulated generator needs a 'values' array");
    return Generator::tabulated(spec["values"].get<std::vector<double>>());
  }
  throw ConfigError("unknown generator family: " + family);
}

struct KernelConfig {
  Kernel kernel;
  Mode natural_mode;
  json resolved;
};

KernelConfig parse_kernel(const json& spec) {
  if (!spec.is_object()) throw ConfigError("'kernel' must be an object");
  if (spec.contains("name")) {
    check_keys(spec, {"name", "m", "y", "a", "b", "c"}, "kernel");
    const std::string name = spec["name"].get<std::string>();
    const int m = static_cast<int>(require_number(spec, "m", "kernel"));
    const double y = spec.value("y", 0.0);
    const double a = spec.value("a", 0.0);
    const double b = spec.value("b", 0.0);
    const int c = spec.value("c", 0);
    NamedKernel named = named_kernel(name, m, y, a, b, c);
    json resolved = json::object();
    resolved["name"] = name;
    resolved["m"] = m;
    if (name == "generalized-perimeter") resolved["y"] = y;
    if (name == "alexander-stolarsky") {
      resolved["a"] = a;
      resolved["b"] = b;
      resolved["c"] = c;
    }
    return {std::move(named.kernel), named.natural_mode, std::move(resolved)};
  }
  check_keys(spec, {"family", "generator", "m"}, "kernel");
  if (!spec.contains("family") || !spec.contains("generator"))
    throw ConfigError("kernel needs either a 'name' or a 'family' plus 'generator'");
  const std::string family = spec["family"].get<std::string>();
  const int m = static_cast<int>(require_number(spec, "m", "kernel"));
  Generator g = parse_generator(spec["generator"]);
  json resolved = spec;
  if (family == "gap-sum") return {Kernel::gap_sum(std::move(g), m), Mode::UMax, resolved};
  if (family == "pairwise-sum")
    return {Kernel::pairwise_sum(std::move(g), m), Mode::UMax, resolved};
  throw ConfigError("unknown kernel family: " + family);
}

Density parse_density(const json& spec) {
  if (!spec.is_object()) throw ConfigError("'density' must be an object");
  if (!spec.contains("family")) throw ConfigError("density needs a 'family'");
  const std::string family = spec["family"].get<std::string>();
  if (family == "uniform") {
    check_keys(spec, {"family"}, "density");
    return Density::uniform();
  }
  if (family == "von-mises") {
    check_keys(spec, {"family", "mu", "kappa"}, "density");
    return Density::von_mises(require_number(spec, "mu", "density"),
                              require_number(spec, "kappa", "density"));
  }
  if (family == "tabulated") {
    check_keys(spec, {"family", "path", "values"}, "density");
    if (spec.contains("path")) return Density::from_csv(spec["path"].get<std::string>());
    if (spec.contains("values") && spec["values"].is_array())
      return Density::tabulated(spec["values"].get<std::vector<double>>());
    throw ConfigError("tabulated density needs a 'path' or a 'values' array");
  }
  if (family == "mixture") {
    check_keys(spec, {"family", "weights", "components"}, "density");
    if (!spec.contains("weights") || !spec.contains("components"))
      throw ConfigError("mixture density needs 'weights' and 'components'");
    std::vector<Density> components;
    for (const json& c : spec["components"]) components.push_back(parse_density(c));
    return Density::mixture(spec["weights"].get<std::vector<double>>(), std::move(components));
  }
  throw ConfigError("unknown density family: " + family);
}

Mode parse_mode(const json& cfg, Mode natural) {
  if (!cfg.contains("mode")) return natural;
  const std::string mode = cfg["mode"].get<std::string>();
  if (mode == "u-max") return Mode::UMax;
  if (mode == "u-min") return Mode::UMin;
  throw ConfigError("mode must be 'u-max' or 'u-min'");
}

SubsetEvaluator parse_evaluator(const json& cfg) {
  const std::string e = cfg.value("evaluator", "auto");
  if (e == "auto") return SubsetEvaluator::Auto;
  if (e == "brute-force") return SubsetEvaluator::BruteForce;
  if (e == "gap-dp") return SubsetEvaluator::GapDp;
  throw ConfigError("evaluator must be auto | brute-force | gap-dp");
}

OracleOptions parse_oracle(const json& cfg, int threads, int m) {
  OracleOptions opt;
  opt.threads = threads;
  if (cfg.contains("oracle")) {
    const json& o = cfg["oracle"];
    check_keys(o, {"grid_n", "refine_iters"}, "oracle");
    if (o.contains("grid_n")) opt.grid_n = o["grid_n"].get<int>();
    if (o.contains("refine_iters")) opt.refine_iters = o["refine_iters"].get<int>();
  }
  if (opt.grid_n == 0) opt.grid_n = (m <= 4) ? 120 : 40;  // materialize the default
  return opt;
}

// ---------------------------------------------------------------------------
// Report helpers.

const char* mode_name(Mode mode) { return mode == Mode::UMax ? "u-max" : "u-min"; }
const char* evaluator_name(SubsetEvaluator e) {
  switch (e) {
    case SubsetEvaluator::Auto: return "auto";
    case SubsetEvaluator::BruteForce: return "brute-force";
    case SubsetEvaluator::GapDp: return "gap-dp";
  }
  return "?";
}

JsonValue json_from_nlohmann(const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      JsonValue v = JsonValue::object();
      for (auto it = j.begin(); it != j.end(); ++it) v.set(it.key(), json_from_nlohmann(*it));
      return v;
    }
    case json::value_t::array: {
      JsonValue v = JsonValue::array();
      for (const json& item : j) v.push(json_from_nlohmann(item));
      return v;
    }
    case json::value_t::string:
      return JsonValue(j.get<std::string>());
    case json::value_t::boolean:
      return JsonValue(j.get<bool>());
    case json::value_t::number_integer:
      return JsonValue(j.get<std::int64_t>());
    case json::value_t::number_unsigned:
      return JsonValue(j.get<std::uint64_t>());
    case json::value_t::number_float:
      return JsonValue(j.get<double>());
    default:
      return JsonValue();
  }
}

struct CommonConfig {
  KernelConfig kernel;
  Density density;
  Mode mode;
  std::uint64_t master_seed = 0;
  int threads = 1;
  OracleOptions oracle;
  json density_echo;
};

CommonConfig parse_common(const json& cfg, std::optional<std::uint64_t> seed_override,
                          std::optional<int> threads_override) {
  if (!cfg.contains("kernel")) throw ConfigError("config needs a 'kernel'");
  if (!cfg.contains("density")) throw ConfigError("config needs a 'density'");
  CommonConfig out{parse_kernel(cfg["kernel"]), parse_density(cfg["density"]), Mode::UMax};
  out.mode = parse_mode(cfg, out.kernel.natural_mode);
  out.master_seed = cfg.value("master_seed", std::uint64_t{0});
  if (seed_override) out.master_seed = *seed_override;
  out.threads = cfg.value("threads", 1);
  if (threads_override) out.threads = *threads_override;
  if (out.threads < 1) throw ConfigError("threads must be >= 1");
  out.oracle = parse_oracle(cfg, out.threads, out.kernel.kernel.degree());
  out.density_echo = cfg["density"];
  return out;
}

JsonValue resolved_config(const CommonConfig& common) {
  JsonValue cfg = JsonValue::object();
  cfg.set("kernel", json_from_nlohmann(common.kernel.resolved));
  cfg.set("density", json_from_nlohmann(common.density_echo));
  cfg.set("mode", mode_name(common.mode));
  cfg.set("master_seed", common.master_seed);
  // The thread cap is deliberately not echoed: outputs are independent of it.
  JsonValue oracle = JsonValue::object();
  oracle.set("grid_n", common.oracle.grid_n);
  oracle.set("refine_iters", common.oracle.refine_iters);
  cfg.set("oracle", std::move(oracle));
  return cfg;
}

JsonValue analysis_report(const Analysis& a) {
  JsonValue r = JsonValue::object();
  r.set("m", a.m);
  r.set("mode", mode_name(a.mode));
  r.set("extreme_value", a.extreme_value);
  r.set("extreme_value_closed_form",
        a.extreme_closed_form ? JsonValue(*a.extreme_closed_form) : JsonValue());
  JsonValue maximizers = JsonValue::array();
  for (const MaximizerInfo& info : a.maximizers) {
    JsonValue mj = JsonValue::object();
    JsonValue angles = JsonValue::array();
    for (double x : info.angles) angles.push(JsonValue(x));
    mj.set("angles", std::move(angles));
    mj.set("det_neg_hessian_fd", info.det_fd);
    mj.set("det_neg_hessian_analytic",
           info.det_analytic ? JsonValue(*info.det_analytic) : JsonValue());
    mj.set("det_relative_gap", info.det_analytic
                                   ? JsonValue(std::abs(info.det_fd - *info.det_analytic) /
                                               std::abs(*info.det_analytic))
                                   : JsonValue());
    mj.set("product_integral", info.product_integral);
    mj.set("b3_ok", info.b3_ok);
    maximizers.push(std::move(mj));
  }
  r.set("ordered_maximizers", std::move(maximizers));
  r.set("orbit_length", a.orbit_length);
  r.set("total_maximizer_count", a.total_point_count);
  JsonValue cond = JsonValue::object();
  cond.set("a4_interior", a.conditions.a4_interior);
  cond.set("a6_nondegenerate", a.conditions.a6_nondegenerate);
  cond.set("negative_definite", a.conditions.negative_definite);
  cond.set("diagonally_dominant", a.conditions.diagonally_dominant
                                      ? JsonValue(*a.conditions.diagonally_dominant)
                                      : JsonValue());
  r.set("conditions", std::move(cond));
  JsonValue law = JsonValue::object();
  law.set("k_ordered", a.k_ordered);
  law.set("k_total", a.k_total);
  law.set("coefficient", a.coefficient);
  law.set("coefficient_fd", a.coefficient_fd);
  law.set("coefficient_analytic",
          a.coefficient_analytic ? JsonValue(*a.coefficient_analytic) : JsonValue());
  law.set("scaling_exponent", a.law.scaling_exponent());
  law.set("shape_exponent", a.law.shape_exponent());
  law.set("cdf", "F(t) = 1 - exp(-coefficient * t^shape_exponent)");
  r.set("limit_law", std::move(law));
  return r;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_analyze(const json& cfg, const fs::path& out_dir,
                std::optional<std::uint64_t> seed_override, std::optional<int> threads_override) {
  check_keys(cfg, {"kernel", "density", "mode", "master_seed", "threads", "oracle"}, "config");
  const CommonConfig common = parse_common(cfg, seed_override, threads_override);
  const Analysis a =
      analyze(common.kernel.kernel, common.density, {common.mode, common.oracle});
  JsonValue report = JsonValue::object();
  report.set("tool", "umax");
  report.set("command", "analyze");
  report.set("config", resolved_config(common));
  report.set("result", analysis_report(a));
  write_file(out_dir / "analysis.json", report.dump());
  std::cout << report.dump();
  return 0;
}

int cmd_simulate(const json& cfg, const fs::path& out_dir,
                 std::optional<std::uint64_t> seed_override, std::optional<int> threads_override) {
  check_keys(cfg,
             {"kernel", "density", "mode", "master_seed", "threads", "oracle", "n", "replicates",
              "evaluator"},
             "config");
  const CommonConfig common = parse_common(cfg, seed_override, threads_override);
  const auto n = static_cast<std::int64_t>(require_number(cfg, "n", "config"));
  const int replicates = static_cast<int>(require_number(cfg, "replicates", "config"));
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (n < common.kernel.kernel.degree()) throw ConfigError("n must be >= m");
  const SubsetEvaluator evaluator = parse_evaluator(cfg);

  const Analysis a =
      analyze(common.kernel.kernel, common.density, {common.mode, common.oracle});
  SimulationConfig sim{common.kernel.kernel, common.density,       n,
                       replicates,           common.master_seed,   common.mode,
                       evaluator,            common.threads};
  const SimulationResult res = run_replicates(sim, a.law, a.extreme_value);

  JsonValue config_echo = resolved_config(common);
  config_echo.set("n", n);
  config_echo.set("replicates", replicates);
  config_echo.set("evaluator", evaluator_name(evaluator));

  JsonValue result = JsonValue::object();
  result.set("extreme_value", a.extreme_value);
  result.set("coefficient", a.coefficient);
  result.set("scaling_exponent", a.law.scaling_exponent());
  result.set("shape_exponent", a.law.shape_exponent());
  result.set("ks_distance", res.ks_distance);
  JsonValue hn = JsonValue::object();
  hn.set("min", res.hn.min);
  hn.set("median", res.hn.median);
  hn.set("max", res.hn.max);
  result.set("hn", std::move(hn));

  JsonValue report = JsonValue::object();
  report.set("tool", "umax");
  report.set("command", "simulate");
  report.set("config", std::move(config_echo));
  report.set("result", std::move(result));
  write_file(out_dir / "simulation.json", report.dump());

  std::string csv = "t,ecdf\n";
  const auto& sorted = res.ecdf.sorted_values();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    csv += csv_number(sorted[i]);
    csv += ",";
    csv += csv_number(static_cast<double>(i + 1) / static_cast<double>(sorted.size()));
    csv += "\n";
  }
  write_file(out_dir / "ecdf.csv", csv);
  std::cout << report.dump();
  return 0;
}

int cmd_bound(const json& cfg, const fs::path& out_dir,
              std::optional<std::uint64_t> seed_override, std::optional<int> threads_override) {
  check_keys(cfg,
             {"kernel", "density", "mode", "master_seed", "threads", "oracle", "t", "n_grid",
              "mc_samples", "tau_samples"},
             "config");
  const CommonConfig common = parse_common(cfg, seed_override, threads_override);
  const double t = require_number(cfg, "t", "config");
  if (t < 0.0) throw ConfigError("t must be nonnegative");
  if (!cfg.contains("n_grid") || !cfg["n_grid"].is_array() || cfg["n_grid"].empty())
    throw ConfigError("config needs a nonempty 'n_grid' array");
  const auto n_grid = cfg["n_grid"].get<std::vector<std::int64_t>>();
  const auto samples = static_cast<std::int64_t>(cfg.value("mc_samples", 1e6));

  const Analysis a =
      analyze(common.kernel.kernel, common.density, {common.mode, common.oracle});
  const auto rows = silverman_brown_check(common.kernel.kernel, common.density, common.mode,
                                          a.extreme_value, t,
                                          std::span<const std::int64_t>(n_grid), samples,
                                          common.master_seed, common.threads);
  const int m = common.kernel.kernel.degree();

  JsonValue config_echo = resolved_config(common);
  config_echo.set("t", t);
  JsonValue grid_echo = JsonValue::array();
  for (std::int64_t n : n_grid) grid_echo.push(JsonValue(n));
  config_echo.set("n_grid", std::move(grid_echo));
  config_echo.set("mc_samples", samples);

  JsonValue row_array = JsonValue::array();
  std::string csv = "n,z,p_hat,p_se,lambda_hat,lambda_se,rhs";
  for (int r = 1; r <= m - 1; ++r) {
    csv += ",tau_" + std::to_string(r);
    csv += ",tau_se_" + std::to_string(r);
    csv += ",scaled_" + std::to_string(r);
  }
  csv += "\n";
  for (const SilvermanBrownRow& row : rows) {
    const double rhs = bound_rhs(row.n, m, row.p.p_hat, std::span<const double>(row.tau));
    JsonValue rj = JsonValue::object();
    rj.set("n", row.n);
    rj.set("z", row.z);
    rj.set("p_hat", row.p.p_hat);
    rj.set("p_se", row.p.std_err);
    rj.set("p_hits", row.p.hits);
    rj.set("p_samples", row.p.samples);
    rj.set("lambda_hat", row.lambda_hat);
    rj.set("lambda_se", row.lambda_se);
    rj.set("rhs", rhs);
    JsonValue taus = JsonValue::array();
    JsonValue scaled = JsonValue::array();
    for (std::size_t i = 0; i < row.tau.size(); ++i) {
      JsonValue tj = JsonValue::object();
      tj.set("r", static_cast<std::int64_t>(i + 1));
      tj.set("tau", row.tau[i]);
      tj.set("tau_se", row.tau_se[i]);
      taus.push(std::move(tj));
      scaled.push(JsonValue(row.scaled[i]));
    }
    rj.set("tau", std::move(taus));
    rj.set("scaled", std::move(scaled));
    row_array.push(std::move(rj));

    csv += std::to_string(row.n);
    csv += "," + csv_number(row.z);
    csv += "," + csv_number(row.p.p_hat);
    csv += "," + csv_number(row.p.std_err);
    csv += "," + csv_number(row.lambda_hat);
    csv += "," + csv_number(row.lambda_se);
    csv += "," + csv_number(rhs);
    for (std::size_t i = 0; i < row.tau.size(); ++i) {
      csv += "," + csv_number(row.tau[i]);
      csv += "," + csv_number(row.tau_se[i]);
      csv += "," + csv_number(row.scaled[i]);
    }
    csv += "\n";
  }

  JsonValue result = JsonValue::object();
  result.set("extreme_value", a.extreme_value);
  result.set("coefficient", a.coefficient);
  result.set("lambda_target", a.coefficient * std::pow(t, 0.5 * (m - 1)));
  result.set("rows", std::move(row_array));

  JsonValue report = JsonValue::object();
  report.set("tool", "umax");
  report.set("command", "bound");
  report.set("config", std::move(config_echo));
  report.set("result", std::move(result));
  write_file(out_dir / "bound.json", report.dump());
  write_file(out_dir / "diagnostics.csv", csv);
  std::cout << report.dump();
  return 0;
}

int fail_with(const Error& e) {
  JsonValue err = JsonValue::object();
  JsonValue detail = JsonValue::object();
  detail.set("code", e.code());
  detail.set("exit", static_cast<std::int64_t>(static_cast<int>(e.kind())));
  detail.set("message", e.what());
  err.set("error", std::move(detail));
  std::cout << err.dump();
  return static_cast<int>(e.kind());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weibull limit laws for U-max/U-min statistics of rotation-invariant kernels "
               "on the circle"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  std::optional<int> threads_override;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed_override, "override the config master seed");
    sub->add_option("--threads", threads_override, "worker thread cap");
  };
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "extremum + limit-law analysis");
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo law verification");
  CLI::App* bound_cmd = app.add_subcommand("bound", "Poisson approximation diagnostics");
  add_common(analyze_cmd);
  add_common(simulate_cmd);
  add_common(bound_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage errors are config errors
  }

  try {
    json cfg;
    {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config: " + config_path);
      try {
        in >> cfg;
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
    }
    if (!cfg.is_object()) throw ConfigError("config root must be a JSON object");
    const fs::path out(out_dir);
    if (analyze_cmd->parsed()) return cmd_analyze(cfg, out, seed_override, threads_override);
    if (simulate_cmd->parsed()) return cmd_simulate(cfg, out, seed_override, threads_override);
    return cmd_bound(cfg, out, seed_override, threads_override);
  } catch (const Error& e) {
    return fail_with(e);
  } catch (const std::exception& e) {
    return fail_with(DomainError(std::string("unexpected failure: ") + e.what()));
  }
}
