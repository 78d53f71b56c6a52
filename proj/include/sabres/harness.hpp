#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "sabres/benchmarks.hpp"
#include "sabres/engine.hpp"
#include "sabres/rng.hpp"
#include "sabres/trace.hpp"

namespace sabres {

struct TrialResult {
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  double best_error = 0.0;
  std::size_t fes_used = 0;
  Termination terminated = Termination::budget_exhausted;
  Trace trace;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

struct TrialSummary {
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double std = 0.0;
};

class TrialError : public std::runtime_error {
 public:
  TrialError(std::size_t run_index, const std::string& what)
      : std::runtime_error("trial " + std::to_string(run_index) + ": " + what), run_index_(run_index) {}
  std::size_t run_index() const noexcept { return run_index_; }

 private:
  std::size_t run_index_;
};

// Per-trial seed: mix_seed(base_seed, run_index).
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t run_index) {
  return mix_seed(base_seed, run_index);
}

inline TrialResult run_trial(const SabresConfig& config, const ObjectiveSpec& spec, std::uint64_t base_seed,
                             std::size_t run_index) {
  const std::uint64_t seed = trial_seed(base_seed, run_index);
  RandomStream stream(seed);
  RunResult r = run(config, spec, stream);
  return {run_index, seed, r.best_error, r.fes_used, r.termination, std::move(r.trace)};
}

/// Runs trials on up to `threads` workers (0 = hardware concurrency). Output
/// is ordered by run index and does not depend on the thread count.
inline std::vector<TrialResult> run_trials(const SabresConfig& config, const ObjectiveSpec& spec,
                                           std::uint64_t base_seed, std::size_t runs, std::size_t threads = 0) {
  if (runs < 1) throw std::invalid_argument("run_trials: runs must be >= 1");
  config.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, runs);

  std::vector<TrialResult> results(runs);
  std::vector<std::exception_ptr> errors(runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < runs; r = next++) {
      try {
        results[r] = run_trial(config, spec, base_seed, r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (std::size_t r = 0; r < runs; ++r) {
    if (!errors[r]) continue;
    try {
      std::rethrow_exception(errors[r]);
    } catch (const std::exception& e) {
      throw TrialError(r, e.what());
    }
  }
  return results;
}

inline TrialSummary summarize(std::span<const double> errors) {
  if (errors.empty()) throw std::invalid_argument("summarize: no results");
  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  TrialSummary s;
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  double sum = 0.0;
  for (double e : sorted) sum += e;
  s.mean = sum / static_cast<double>(n);
  // Clamp against rounding pushing the mean outside [min, max].
  s.mean = std::clamp(s.mean, s.min, s.max);
  if (n > 1) {
    double ss = 0.0;
    for (double e : sorted) ss += (e - s.mean) * (e - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return s;
}

inline TrialSummary summarize(std::span<const TrialResult> results) {
  if (results.empty()) throw std::invalid_argument("summarize: no results");
  std::vector<double> errors;
  errors.reserve(results.size());
  for (const auto& r : results) errors.push_back(r.best_error);
  return summarize(std::span<const double>(errors));
}

// Lexicographic (error, fes) comparison of two trials: true if a is better.
inline bool better_trial(const TrialResult& a, const TrialResult& b) {
  if (a.best_error != b.best_error) return a.best_error < b.best_error;
  return a.fes_used < b.fes_used;
}

// ---------------------------------------------------------------------------
// Complexity

struct ComplexityReport {
  std::size_t dim = 0;
  double t0 = 0.0;
  double t1 = 0.0;
  double t2_hat = 0.0;
  double metric = 0.0;
};

namespace detail {

template <class F>
double seconds(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

// Reference arithmetic loop: 1e6 iterations of
//   x = 0.55; x += x; x /= 2; x *= x; x = sqrt(x); x = log(x); x = exp(x); x = x / (x + 2)
inline double reference_loop_seconds() {
  volatile double sink = 0.0;
  return detail::seconds([&] {
    for (int i = 0; i < 1000000; ++i) {
      double x = 0.55 + sink * 0.0;
      x = x + x;
      x = x / 2.0;
      x = x * x;
      x = std::sqrt(x);
      x = std::log(x);
      x = std::exp(x);
      x = x / (x + 2.0);
      sink = x;
    }
  });
}

inline constexpr std::size_t kComplexityEvaluations = 200000;
inline constexpr std::size_t kComplexityRuns = 5;

/// T0: reference loop. T1: 2e5 evaluations of the f1 instance at `dim`.
/// T2_hat: mean wall time of 5 optimizer runs on the same function, each
/// spending the full 2e5-evaluation budget. metric = (T2_hat - T1) / T0.
inline ComplexityReport measure_complexity(std::size_t dim, RandomStream& stream) {
  const ObjectiveSpec spec = make_objective("f1", dim);
  ComplexityReport rep;
  rep.dim = dim;
  rep.t0 = reference_loop_seconds();

  Vector x(dim);
  for (auto& v : x) v = stream.uniform(spec.bounds.lower, spec.bounds.upper);
  volatile double sink = 0.0;
  rep.t1 = detail::seconds([&] {
    for (std::size_t i = 0; i < kComplexityEvaluations; ++i) {
      x[i % dim] = spec.bounds.lower + static_cast<double>(i % 200);
      sink = eval_objective(spec, x);
    }
  });

  SabresConfig config = defaults_for_dim(dim);
  config.max_fes = kComplexityEvaluations;
  // Below the 1e-8 error floor: never reached, so every run uses its full budget.
  config.target_error = 1e-300;
  double total = 0.0;
  for (std::size_t r = 0; r < kComplexityRuns; ++r) {
    RandomStream run_stream(stream.next_u64());
    total += detail::seconds([&] { (void)run(config, spec, run_stream); });
  }
  rep.t2_hat = total / static_cast<double>(kComplexityRuns);
  rep.metric = (rep.t2_hat - rep.t1) / rep.t0;
  return rep;
}

// ---------------------------------------------------------------------------
// Output

inline std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline nlohmann::json summary_json(const std::string& function, std::size_t dim, const TrialSummary& s,
                                   std::span<const TrialResult> results) {
  std::size_t reached = 0;
  for (const auto& r : results) reached += r.terminated == Termination::target_reached;
  return {{"function", function}, {"dim", dim},          {"runs", results.size()},
          {"target_reached", reached}, {"min", s.min},   {"max", s.max},
          {"median", s.median},        {"mean", s.mean}, {"std", s.std}};
}

/// Writes <dir>/results.csv, <dir>/summary.json and one
/// <dir>/trace_run<k>.csv per trial.
inline void write_results(std::span<const TrialResult> results, const TrialSummary& summary,
                          const std::string& function, std::size_t dim, const std::filesystem::path& dir) {
  if (results.empty()) throw std::invalid_argument("write_results: no results");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError(dir.string() + ": " + ec.message());

  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError(p.string() + ": cannot open for writing");
    return out;
  };
  auto close = [](std::ofstream& out, const std::filesystem::path& p) {
    out.close();
    if (!out) throw OutputError(p.string() + ": write failed");
  };

  const auto csv_path = dir / "results.csv";
  auto csv = open(csv_path);
  csv << "function,dim,run,seed,fes_used,best_error,terminated\n";
  for (const auto& r : results) {
    csv << function << ',' << dim << ',' << r.run_index << ',' << r.seed << ',' << r.fes_used << ','
        << format_real(r.best_error) << ',' << to_string(r.terminated) << '\n';
  }
  close(csv, csv_path);

  const auto json_path = dir / "summary.json";
  auto js = open(json_path);
  js << summary_json(function, dim, summary, results).dump(2) << '\n';
  close(js, json_path);

  for (const auto& r : results) {
    const auto trace_path = dir / ("trace_run" + std::to_string(r.run_index) + ".csv");
    auto tf = open(trace_path);
    tf << "fes,min_error,std_error\n";
    for (const auto& p : r.trace) tf << p.fes << ',' << format_real(p.min_error) << ',' << format_real(p.std_error) << '\n';
    close(tf, trace_path);
  }
}

struct CsvRow {
  std::string function;
  std::size_t dim = 0;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::size_t fes_used = 0;
  double best_error = 0.0;
  std::string terminated;
};

inline std::vector<CsvRow> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw OutputError(path.string() + ": cannot open");
  std::string line;
  std::getline(in, line);
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string f[7];
    for (auto& field : f) std::getline(ls, field, ',');
    rows.push_back({f[0], std::stoul(f[1]), std::stoul(f[2]), std::stoull(f[3]), std::stoul(f[4]),
                    std::strtod(f[5].c_str(), nullptr), f[6]});
  }
  return rows;
}

}  // namespace sabres
