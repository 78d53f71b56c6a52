#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sabres/benchmarks.hpp"
#include "sabres/engine.hpp"
#include "sabres/harness.hpp"

namespace sabres::cli {

inline constexpr const char* kOutDirEnv = "SABRES_OUT_DIR";

enum class Command { run, trials, complexity, list_functions };

struct CliInvocation {
  Command command = Command::trials;
  std::string function_id = "f1";
  std::size_t dim = 10;
  std::size_t runs = 30;
  std::uint64_t seed = 1;
  std::optional<std::size_t> max_fes;
  double target_error = 1e-8;
  std::vector<std::string> overrides;  // key=value
  std::string out_dir;
  std::optional<std::string> transform_file;
  std::size_t threads = 0;
  bool dim_given = false;

  SabresConfig config;  // fully resolved
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by parse_args for --help; what() is the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double parse_real(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || *end != '\0') throw UsageError("bad number for " + key + ": '" + value + "'");
  return v;
}

inline std::size_t parse_count(const std::string& key, const std::string& value) {
  const double v = parse_real(key, value);
  if (v < 0 || v != std::floor(v)) throw UsageError("expected a non-negative integer for " + key + ": '" + value + "'");
  return static_cast<std::size_t>(v);
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "on") return true;
  if (value == "0" || value == "false" || value == "off") return false;
  throw UsageError("bad boolean for " + key + ": '" + value + "'");
}

inline Vector parse_real_list(const std::string& key, const std::string& value) {
  Vector out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    out.push_back(parse_real(key, value.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

/// Applies one `key=value` override. Keys are SabresConfig field names.
inline void apply_override(SabresConfig& c, const std::string& assignment) {
  using namespace detail;
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw UsageError("override must be key=value: '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  static const std::map<std::string, void (*)(SabresConfig&, const std::string&, const std::string&)> setters = {
      {"n", [](SabresConfig& c, const std::string& k, const std::string& v) { c.n = parse_count(k, v); }},
      {"m", [](SabresConfig& c, const std::string& k, const std::string& v) { c.m = parse_count(k, v); }},
      {"g0", [](SabresConfig& c, const std::string& k, const std::string& v) { c.g0 = parse_real(k, v); }},
      {"p", [](SabresConfig& c, const std::string& k, const std::string& v) { c.p = parse_real(k, v); }},
      {"gamma", [](SabresConfig& c, const std::string& k, const std::string& v) { c.gamma = parse_real_list(k, v); }},
      {"tau_e", [](SabresConfig& c, const std::string& k, const std::string& v) { c.tau_e = parse_count(k, v); }},
      {"s_g", [](SabresConfig& c, const std::string& k, const std::string& v) { c.s_g = parse_real(k, v); }},
      {"er_interval",
       [](SabresConfig& c, const std::string& k, const std::string& v) { c.er_interval = parse_count(k, v); }},
      {"er_prob", [](SabresConfig& c, const std::string& k, const std::string& v) { c.er_prob = parse_real(k, v); }},
      {"er_var_ratio",
       [](SabresConfig& c, const std::string& k, const std::string& v) { c.er_var_ratio = parse_real(k, v); }},
      {"et_threshold",
       [](SabresConfig& c, const std::string& k, const std::string& v) { c.et_threshold = parse_real(k, v); }},
      {"max_fes", [](SabresConfig& c, const std::string& k, const std::string& v) { c.max_fes = parse_count(k, v); }},
      {"target_error",
       [](SabresConfig& c, const std::string& k, const std::string& v) { c.target_error = parse_real(k, v); }},
      {"predict_diffusion",
       [](SabresConfig& c, const std::string& k, const std::string& v) { c.predict_diffusion = parse_bool(k, v); }},
      {"repulsion_epsilon",
       [](SabresConfig& c, const std::string& k, const std::string& v) { c.repulsion_epsilon = parse_real(k, v); }},
      {"drift_cap_fraction",
       [](SabresConfig& c, const std::string& k, const std::string& v) { c.drift_cap_fraction = parse_real(k, v); }},
  };
  const auto it = setters.find(key);
  if (it == setters.end()) {
    std::string known;
    for (const auto& [k, _] : setters) known += (known.empty() ? "" : ", ") + k;
    throw UsageError("unknown config key '" + key + "' (known: " + known + ")");
  }
  it->second(c, key, value);
}

/// Parses argv (argv[0] is the program name). Throws UsageError on any bad
/// flag or value. Config precedence: built-in defaults, then the
/// dimension-conditional defaults, then --max-fes/--target-error, then --set.
inline CliInvocation parse_args(const std::vector<std::string>& argv) {
  CliInvocation inv;
  CLI::App app{"SABRES optimizer and benchmark harness", "sabres"};
  app.require_subcommand(1);

  std::optional<std::size_t> max_fes;
  std::optional<std::size_t> dim;
  auto add_common = [&](CLI::App* sub, bool with_runs) {
    sub->add_option("--function,-f", inv.function_id, "Function id (see list-functions)");
    sub->add_option("--dim,-d", dim, "Problem dimension");
    sub->add_option("--seed", inv.seed, "Base seed");
    sub->add_option("--max-fes", max_fes, "Evaluation budget per run");
    sub->add_option("--target-error", inv.target_error, "Stop once the error reaches this value");
    sub->add_option("--set", inv.overrides, "Config override key=value (repeatable)");
    sub->add_option("--out-dir,-o", inv.out_dir, "Output directory");
    sub->add_option("--transform-file", inv.transform_file, "Shift/rotation data for base and hybrid functions");
    sub->add_option("--threads", inv.threads, "Worker threads (0 = all cores)");
    if (with_runs) sub->add_option("--runs,-r", inv.runs, "Number of trials");
  };
  auto* run_cmd = app.add_subcommand("run", "Single optimization run");
  add_common(run_cmd, false);
  auto* trials_cmd = app.add_subcommand("trials", "Seeded batch of runs with summary statistics");
  add_common(trials_cmd, true);
  auto* complexity_cmd = app.add_subcommand("complexity", "Measure the T0/T1/T2 complexity metric");
  complexity_cmd->add_option("--dim,-d", dim, "Dimension (default: 10 and 20)");
  complexity_cmd->add_option("--seed", inv.seed, "Seed");
  complexity_cmd->add_option("--out-dir,-o", inv.out_dir, "Output directory");
  auto* list_cmd = app.add_subcommand("list-functions", "Print the function registry");

  std::vector<const char*> cargv;
  cargv.reserve(argv.size());
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (run_cmd->parsed()) {
    inv.command = Command::run;
    inv.runs = 1;
  } else if (trials_cmd->parsed()) {
    inv.command = Command::trials;
  } else if (complexity_cmd->parsed()) {
    inv.command = Command::complexity;
  } else if (list_cmd->parsed()) {
    inv.command = Command::list_functions;
  }

  if (dim) {
    if (*dim == 0) throw UsageError("--dim must be positive");
    inv.dim = *dim;
    inv.dim_given = true;
  }
  if (inv.runs == 0) throw UsageError("--runs must be positive");
  if (!(inv.target_error > 0.0)) throw UsageError("--target-error must be positive");
  if (inv.out_dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    inv.out_dir = env && *env ? env : "sabres_out";
  }
  if (inv.command == Command::run || inv.command == Command::trials) {
    const auto& table = registry();
    if (!table.count(inv.function_id)) {
      std::string known;
      for (const auto& [k, _] : table) known += (known.empty() ? "" : ", ") + k;
      throw UsageError("unknown function '" + inv.function_id + "' (known: " + known + ")");
    }
  }

  inv.config = defaults_for_dim(inv.dim);
  if (max_fes) {
    inv.max_fes = max_fes;
    inv.config.max_fes = *max_fes;
  }
  inv.config.target_error = inv.target_error;
  for (const auto& o : inv.overrides) apply_override(inv.config, o);
  try {
    inv.config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return inv;
}

inline std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2E", v);
  return buf;
}

inline void print_summary_table(std::ostream& out, const std::string& function, std::size_t dim,
                                const TrialSummary& s) {
  char line[256];
  std::snprintf(line, sizeof line, "%-14s %4s %10s %10s %10s %10s %10s\n", "Function", "D", "Min", "Max", "Median",
                "Mean", "Std");
  out << line;
  std::snprintf(line, sizeof line, "%-14s %4zu %10s %10s %10s %10s %10s\n", function.c_str(), dim,
                format_sci(s.min).c_str(), format_sci(s.max).c_str(), format_sci(s.median).c_str(),
                format_sci(s.mean).c_str(), format_sci(s.std).c_str());
  out << line;
}

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

inline ObjectiveSpec resolve_objective(const CliInvocation& inv) {
  ObjectiveSpec spec = make_objective(inv.function_id, inv.dim);
  if (inv.transform_file) {
    if (spec.kind == ObjectiveKind::composition) {
      throw std::runtime_error("--transform-file is not supported for composition functions");
    }
    spec.transform = load_transform(*inv.transform_file, inv.dim);
  }
  return spec;
}

inline int execute(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
  try {
    switch (inv.command) {
      case Command::list_functions:
        for (const auto& id : registry_ids()) out << id << '\n';
        return kOk;

      case Command::run:
      case Command::trials: {
        const ObjectiveSpec spec = resolve_objective(inv);
        const auto results = run_trials(inv.config, spec, inv.seed, inv.runs, inv.threads);
        const auto summary = summarize(std::span<const TrialResult>(results));
        write_results(results, summary, inv.function_id, inv.dim, inv.out_dir);
        print_summary_table(out, inv.function_id, inv.dim, summary);
        std::size_t reached = 0;
        for (const auto& r : results) reached += r.terminated == Termination::target_reached;
        out << reached << '/' << results.size() << " runs reached the target; results in " << inv.out_dir << '\n';
        return kOk;
      }

      case Command::complexity: {
        std::vector<std::size_t> dims = inv.dim_given ? std::vector<std::size_t>{inv.dim} : std::vector<std::size_t>{10, 20};
        RandomStream stream(inv.seed);
        nlohmann::json rows = nlohmann::json::array();
        char line[256];
        std::snprintf(line, sizeof line, "%4s %12s %12s %12s %14s\n", "D", "T0 sec", "T1 sec", "T2_hat sec",
                      "(T2_hat-T1)/T0");
        out << line;
        for (auto d : dims) {
          const auto rep = measure_complexity(d, stream);
          std::snprintf(line, sizeof line, "%4zu %12.4f %12.4f %12.4f %14.4f\n", rep.dim, rep.t0, rep.t1, rep.t2_hat,
                        rep.metric);
          out << line;
          rows.push_back({{"dim", rep.dim}, {"t0", rep.t0}, {"t1", rep.t1}, {"t2_hat", rep.t2_hat},
                          {"metric", rep.metric}});
        }
        std::error_code ec;
        std::filesystem::create_directories(inv.out_dir, ec);
        const auto path = std::filesystem::path(inv.out_dir) / "complexity.json";
        std::ofstream js(path);
        if (ec || !js) throw OutputError(path.string() + ": cannot open for writing");
        js << rows.dump(2) << '\n';
        return kOk;
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kRuntimeError;
}

inline int run_main(const std::vector<std::string>& argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CliInvocation inv;
  try {
    inv = parse_args(argv);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }
  return execute(inv, out, err);
}

}  // namespace sabres::cli
