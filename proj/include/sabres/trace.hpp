#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace sabres {

struct TracePoint {
  std::size_t fes = 0;
  double min_error = 0.0;
  double std_error = 0.0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

using Trace = std::vector<TracePoint>;

// Population (divisor N) statistics of a set of error values; a single value
// has zero spread.
inline TracePoint summarize_errors(std::size_t fes, std::span<const double> errors) {
  TracePoint p{fes, errors.empty() ? 0.0 : errors[0], 0.0};
  if (errors.empty()) return p;
  double mean = 0.0;
  for (double e : errors) {
    p.min_error = e < p.min_error ? e : p.min_error;
    mean += e;
  }
  mean /= static_cast<double>(errors.size());
  double ss = 0.0;
  for (double e : errors) ss += (e - mean) * (e - mean);
  p.std_error = std::sqrt(ss / static_cast<double>(errors.size()));
  return p;
}

// Iteration-count multipliers c with fes = n*m*c at which traces are sampled:
// c_j = ceil(10^(j/8)), deduplicated, up to max_multiplier.
inline std::vector<std::size_t> trace_checkpoints(std::size_t max_multiplier) {
  std::vector<std::size_t> out;
  for (int j = 0;; ++j) {
    const auto c = static_cast<std::size_t>(std::ceil(std::pow(10.0, j / 8.0)));
    if (c > max_multiplier) break;
    if (out.empty() || out.back() != c) out.push_back(c);
  }
  return out;
}

}  // namespace sabres
