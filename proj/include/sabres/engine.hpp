#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sabres/benchmarks.hpp"
#include "sabres/rng.hpp"
#include "sabres/trace.hpp"

namespace sabres {

/// Tunables of the optimizer. Defaults are the 10-dimensional benchmark
/// settings; use defaults_for_dim() for the dimension-conditional ones.
struct SabresConfig {
  std::size_t n = 10;            // trajectories
  std::size_t m = 10;            // realizations per trajectory
  double g0 = 10.0;              // initial gain
  double p = 0.62;               // gain power
  Vector gamma;                  // noise intensity per dimension; empty = 1% of box width, size 1 = broadcast
  std::size_t tau_e = 5;         // perturbation window length (iterations)
  double s_g = 2.0;              // gain restart scale
  std::size_t er_interval = 1000;
  double er_prob = 0.1;
  double er_var_ratio = 0.5;
  double et_threshold = 0.05;
  std::size_t max_fes = 200000;
  double target_error = 1e-8;
  bool predict_diffusion = false;
  double repulsion_epsilon = 1e-8;
  double drift_cap_fraction = 0.1;  // drift magnitude cap, as a fraction of box width

  std::size_t population_size() const { return n * m; }

  void validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("invalid config: " + what); };
    if (n < 2) fail("n must be >= 2");
    if (m < 2) fail("m must be >= 2");
    if (!(g0 > 0.0)) fail("g0 must be positive");
    if (!(p > 0.0 && p <= 1.0)) fail("p must lie in (0, 1]");
    for (double g : gamma) {
      if (!(g > 0.0)) fail("gamma entries must be positive");
    }
    if (tau_e < 1) fail("tau_e must be >= 1");
    if (!(s_g > 0.0)) fail("s_g must be positive");
    if (er_interval < 1) fail("er_interval must be >= 1");
    if (!(er_prob >= 0.0 && er_prob <= 1.0)) fail("er_prob must lie in [0, 1]");
    if (!(er_var_ratio >= 0.0)) fail("er_var_ratio must be non-negative");
    if (!(et_threshold > 0.0)) fail("et_threshold must be positive");
    if (max_fes < population_size()) fail("max_fes must be >= n*m");
    if (!(target_error > 0.0)) fail("target_error must be positive");
    if (!(repulsion_epsilon >= 0.0)) fail("repulsion_epsilon must be non-negative");
    if (!(drift_cap_fraction > 0.0)) fail("drift_cap_fraction must be positive");
  }

  Vector gamma_for(const ObjectiveSpec& spec) const {
    if (gamma.empty()) return Vector(spec.dim, 0.01 * spec.bounds.width());
    if (gamma.size() == 1) return Vector(spec.dim, gamma[0]);
    if (gamma.size() != spec.dim) throw std::invalid_argument("invalid config: gamma has wrong dimension");
    return gamma;
  }
};

// Benchmark protocol defaults: budget 2e5 / p = 0.62 at D <= 10, 1e6 / 0.7 above.
inline SabresConfig defaults_for_dim(std::size_t dim) {
  SabresConfig c;
  if (dim >= 20) {
    c.max_fes = 1000000;
    c.p = 0.7;
  }
  return c;
}

/// n x m x D block of positions, row-major by (trajectory, realization).
class Population {
 public:
  Population() = default;
  Population(std::size_t n, std::size_t m, std::size_t dim) : n_(n), m_(m), dim_(dim), data_(n * m * dim, 0.0) {}

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return n_ * m_; }

  std::span<double> at(std::size_t i, std::size_t k) { return {data_.data() + (i * m_ + k) * dim_, dim_}; }
  std::span<const double> at(std::size_t i, std::size_t k) const {
    return {data_.data() + (i * m_ + k) * dim_, dim_};
  }
  double& at(std::size_t i, std::size_t k, std::size_t d) { return data_[(i * m_ + k) * dim_ + d]; }
  double at(std::size_t i, std::size_t k, std::size_t d) const { return data_[(i * m_ + k) * dim_ + d]; }

  std::span<const double> values() const { return data_; }

  void clamp_to(const Bounds& b) {
    for (auto& v : data_) v = b.clamp(v);
  }

  friend bool operator==(const Population&, const Population&) = default;

 private:
  std::size_t n_ = 0, m_ = 0, dim_ = 0;
  Vector data_;
};

struct VarianceHistory {
  double oldest = 0.0;  // fitness variance two iterations back
  double newest = 0.0;  // fitness variance one iteration back

  void push(double v) {
    oldest = newest;
    newest = v;
  }
};

struct ScrambleDraw {
  std::size_t trajectory;
  std::size_t realization;
};

struct EngineState {
  Population positions;
  Vector fitness;  // n*m, indexed i*m + k
  std::size_t tau = 1;
  std::size_t fes_used = 0;
  double gain_base = 0.0;
  std::size_t restart_count = 0;
  std::size_t mutation_remaining = 0;  // mutating iterations still to come after the current one
  VarianceHistory var_history;
  double f_star = 0.0;
  double best_error = std::numeric_limits<double>::infinity();
  Vector best_position;
  std::size_t iterations = 0;

  // Diagnostics from the most recent step.
  bool mutated_last_step = false;
  std::vector<ScrambleDraw> last_scramble;

  double fitness_at(std::size_t i, std::size_t k) const { return fitness[i * positions.m() + k]; }
};

/// Picks i_alpha for each trajectory i.
struct RepresentativeSet {
  std::vector<std::size_t> picks;
};

struct RepulsionLimits {
  double epsilon = 1e-8;  // pairwise separations below this are clamped
  double max_magnitude = std::numeric_limits<double>::infinity();

  static RepulsionLimits none() { return {0.0, std::numeric_limits<double>::infinity()}; }
};

inline RepulsionLimits repulsion_limits(const SabresConfig& config, const Bounds& bounds) {
  return {config.repulsion_epsilon, config.drift_cap_fraction * bounds.width()};
}

inline double population_variance(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size());
}

// ---------------------------------------------------------------------------
// Initialization

inline EngineState init_population(const SabresConfig& config, const ObjectiveSpec& spec, RandomStream& stream) {
  config.validate();
  if (spec.dim == 0) throw std::invalid_argument("init_population: objective has zero dimension");
  if (!(spec.bounds.lower < spec.bounds.upper)) throw std::invalid_argument("init_population: empty search box");

  EngineState s;
  s.positions = Population(config.n, config.m, spec.dim);
  for (std::size_t i = 0; i < config.n; ++i) {
    for (std::size_t k = 0; k < config.m; ++k) {
      for (auto& v : s.positions.at(i, k)) v = stream.uniform(spec.bounds.lower, spec.bounds.upper);
    }
  }
  s.f_star = spec.f_star;
  s.fitness.resize(config.population_size());
  for (std::size_t i = 0; i < config.n; ++i) {
    for (std::size_t k = 0; k < config.m; ++k) {
      const double f = eval_objective(spec, s.positions.at(i, k));
      s.fitness[i * config.m + k] = f;
      const double err = error_value(f, spec.f_star);
      if (err < s.best_error) {
        s.best_error = err;
        s.best_position.assign(s.positions.at(i, k).begin(), s.positions.at(i, k).end());
      }
    }
  }
  s.fes_used = config.population_size();
  s.tau = 1;
  s.gain_base = config.g0;
  s.mutation_remaining = 0;
  const double v = population_variance(s.fitness);
  s.var_history = {v, v};
  return s;
}

// ---------------------------------------------------------------------------
// Gain schedule

inline double gain_at(double gain_base, double p, std::size_t tau) {
  return gain_base / std::pow(static_cast<double>(tau), p);
}

inline double current_gain(const EngineState& state, const SabresConfig& config) {
  return gain_at(state.gain_base, config.p, state.tau);
}

/// Restarts the gain when it has decayed below et_threshold. The first
/// restart scales the base by s_g; later ones by a uniform draw in [1, s_g).
/// Returns true if a restart fired.
inline bool check_gain_restart(EngineState& state, const SabresConfig& config, RandomStream& stream) {
  if (!(current_gain(state, config) < config.et_threshold)) return false;
  if (state.restart_count == 0) {
    state.gain_base *= config.s_g;
  } else {
    state.gain_base *= stream.uniform(std::min(1.0, config.s_g), std::max(1.0, config.s_g));
  }
  ++state.restart_count;
  return true;
}

// ---------------------------------------------------------------------------
// Exploration

// Opening condition for a perturbation window, given the coin already drawn.
inline bool exploration_gate(std::size_t tau, double coin, const VarianceHistory& vars, const SabresConfig& config) {
  return tau % config.er_interval == 0 && coin < config.er_prob && vars.newest > config.er_var_ratio * vars.oldest;
}

/// True when this iteration mutates: either a window is in progress or the
/// gate opens a new one of tau_e iterations (this one included). The coin is
/// only drawn on interval iterations.
inline bool check_exploration_trigger(EngineState& state, const SabresConfig& config, RandomStream& stream) {
  if (state.mutation_remaining > 0) {
    --state.mutation_remaining;
    return true;
  }
  if (state.tau % config.er_interval != 0) return false;
  const double coin = stream.unit();
  if (!exploration_gate(state.tau, coin, state.var_history, config)) return false;
  state.mutation_remaining = config.tau_e - 1;
  return true;
}

inline RepresentativeSet select_representatives(std::size_t n, std::size_t m, RandomStream& stream) {
  RepresentativeSet reps;
  reps.picks.resize(n);
  for (auto& p : reps.picks) p = m > 1 ? static_cast<std::size_t>(stream.below(m)) : 0;
  return reps;
}

/// Sum over j != i of 1 / (x_i - x_j). Pairs closer than limits.epsilon
/// contribute sign(x_i - x_j) / epsilon, with ties broken towards + when
/// i < j. The total is clamped to +-limits.max_magnitude.
inline double repulsive_drift(std::span<const double> xs, std::size_t i, const RepulsionLimits& limits = {}) {
  if (xs.size() < 2) throw std::invalid_argument("repulsive_drift: need at least two trajectories");
  double drift = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (j == i) continue;
    const double diff = xs[i] - xs[j];
    if (std::abs(diff) < limits.epsilon) {
      const double sign = diff > 0.0 ? 1.0 : diff < 0.0 ? -1.0 : (i < j ? 1.0 : -1.0);
      drift += sign / limits.epsilon;
    } else {
      drift += 1.0 / diff;
    }
  }
  return std::clamp(drift, -limits.max_magnitude, limits.max_magnitude);
}

/// Moves the representative realization of every trajectory by the
/// repulsive drift among representatives (per coordinate) plus gamma[d]
/// times a standard normal. Other realizations are copied unchanged.
inline Population exploratory_update(const Population& positions, const RepresentativeSet& reps,
                                     std::span<const double> gamma, const RepulsionLimits& limits,
                                     const Bounds& bounds, RandomStream& stream) {
  const std::size_t n = positions.n();
  const std::size_t dim = positions.dim();
  if (reps.picks.size() != n) throw std::invalid_argument("exploratory_update: one representative per trajectory");
  if (gamma.size() != dim) throw std::invalid_argument("exploratory_update: gamma dimension mismatch");

  Population proposals = positions;
  Vector column(n);
  for (std::size_t d = 0; d < dim; ++d) {
    for (std::size_t i = 0; i < n; ++i) column[i] = positions.at(i, reps.picks[i], d);
    for (std::size_t i = 0; i < n; ++i) {
      const double moved = column[i] + repulsive_drift(column, i, limits) + gamma[d] * stream.standard_normal();
      proposals.at(i, reps.picks[i], d) = bounds.clamp(moved);
    }
  }
  return proposals;
}

// ---------------------------------------------------------------------------
// Exploitation

// One (sigma_n(i), sigma_m(k)) pair per particle, never the particle itself
// in either index.
inline std::vector<ScrambleDraw> draw_scramble(std::size_t n, std::size_t m, RandomStream& stream) {
  std::vector<ScrambleDraw> out;
  out.reserve(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t si = stream.index_excluding(n, i);
      const std::size_t sk = stream.index_excluding(m, k);
      out.push_back({si, sk});
    }
  }
  return out;
}

/// candidate = x - gain * (x_peer - x), peer chosen by the scramble.
inline Population directional_update(const Population& proposals, double gain, std::span<const ScrambleDraw> scramble,
                                     const Bounds& bounds) {
  const std::size_t n = proposals.n(), m = proposals.m(), dim = proposals.dim();
  if (scramble.size() != n * m) throw std::invalid_argument("directional_update: scramble size mismatch");
  Population candidates(n, m, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const auto& s = scramble[i * m + k];
      const auto self = proposals.at(i, k);
      const auto peer = proposals.at(s.trajectory, s.realization);
      auto out = candidates.at(i, k);
      for (std::size_t d = 0; d < dim; ++d) {
        const double innovation = peer[d] - self[d];
        out[d] = bounds.clamp(self[d] - gain * innovation);
      }
    }
  }
  return candidates;
}

inline Population directional_update(const Population& proposals, double gain, const Bounds& bounds,
                                     RandomStream& stream, std::vector<ScrambleDraw>* drawn = nullptr) {
  auto scramble = draw_scramble(proposals.n(), proposals.m(), stream);
  Population out = directional_update(proposals, gain, scramble, bounds);
  if (drawn) *drawn = std::move(scramble);
  return out;
}

// ---------------------------------------------------------------------------
// Selection

/// Evaluates every candidate; each replaces its predecessor unless strictly
/// worse.
inline void rejection_sample(EngineState& state, const Population& candidates, const ObjectiveSpec& spec) {
  const std::size_t n = state.positions.n(), m = state.positions.m();
  if (candidates.n() != n || candidates.m() != m || candidates.dim() != state.positions.dim()) {
    throw std::invalid_argument("rejection_sample: shape mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const auto cand = candidates.at(i, k);
      const double f = eval_objective(spec, cand);
      const double err = error_value(f, spec.f_star);
      double& stored = state.fitness[i * m + k];
      if (f > stored) continue;
      stored = f;
      std::copy(cand.begin(), cand.end(), state.positions.at(i, k).begin());
      if (err < state.best_error) {
        state.best_error = err;
        state.best_position.assign(cand.begin(), cand.end());
      }
    }
  }
  state.fes_used += n * m;
}

// ---------------------------------------------------------------------------
// Iteration

inline void step(EngineState& state, const ObjectiveSpec& spec, const SabresConfig& config, RandomStream& stream) {
  const Bounds& box = spec.bounds;
  const Vector gamma = config.gamma_for(spec);

  const bool mutate = check_exploration_trigger(state, config, stream);
  Population proposals;
  std::vector<bool> moved;
  if (mutate) {
    const auto reps = select_representatives(config.n, config.m, stream);
    proposals = exploratory_update(state.positions, reps, gamma, repulsion_limits(config, box), box, stream);
    if (config.predict_diffusion) {
      moved.assign(config.population_size(), false);
      for (std::size_t i = 0; i < config.n; ++i) moved[i * config.m + reps.picks[i]] = true;
    }
  } else {
    proposals = state.positions;
  }
  if (config.predict_diffusion) {
    for (std::size_t i = 0; i < config.n; ++i) {
      for (std::size_t k = 0; k < config.m; ++k) {
        if (!moved.empty() && moved[i * config.m + k]) continue;
        auto x = proposals.at(i, k);
        for (std::size_t d = 0; d < spec.dim; ++d) x[d] = box.clamp(x[d] + gamma[d] * stream.standard_normal());
      }
    }
  }

  check_gain_restart(state, config, stream);
  const Population candidates =
      directional_update(proposals, current_gain(state, config), box, stream, &state.last_scramble);
  rejection_sample(state, candidates, spec);

  state.var_history.push(population_variance(state.fitness));
  state.mutated_last_step = mutate;
  ++state.tau;
  ++state.iterations;
}

enum class Termination { target_reached, budget_exhausted };

inline constexpr std::string_view to_string(Termination t) {
  return t == Termination::target_reached ? "target_reached" : "budget_exhausted";
}

inline TracePoint record_trace(const EngineState& state) {
  Vector errors(state.fitness.size());
  for (std::size_t i = 0; i < errors.size(); ++i) errors[i] = error_value(state.fitness[i], state.f_star);
  return summarize_errors(state.fes_used, errors);
}

struct RunResult {
  double best_error = 0.0;
  Vector best_position;
  std::size_t fes_used = 0;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  Termination termination = Termination::budget_exhausted;
  Trace trace;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Runs until the floored error reaches target_error or another full
/// iteration would exceed max_fes. Traces are sampled at fes = n*m*c for the
/// geometric multipliers of trace_checkpoints(), plus the final state.
inline RunResult run(const SabresConfig& config, const ObjectiveSpec& spec, RandomStream& stream) {
  EngineState state = init_population(config, spec, stream);
  const std::size_t pop = config.population_size();
  const auto checkpoints = trace_checkpoints(config.max_fes / pop);
  std::size_t next_checkpoint = 0;

  RunResult result;
  auto maybe_record = [&] {
    const std::size_t mult = state.fes_used / pop;
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] < mult) ++next_checkpoint;
    if (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == mult) {
      result.trace.push_back(record_trace(state));
      ++next_checkpoint;
    }
  };

  maybe_record();
  while (state.best_error > config.target_error && state.fes_used + pop <= config.max_fes) {
    step(state, spec, config, stream);
    maybe_record();
  }
  if (result.trace.empty() || result.trace.back().fes != state.fes_used) result.trace.push_back(record_trace(state));

  result.best_error = state.best_error;
  result.best_position = state.best_position;
  result.fes_used = state.fes_used;
  result.iterations = state.iterations;
  result.restarts = state.restart_count;
  result.termination =
      state.best_error <= config.target_error ? Termination::target_reached : Termination::budget_exhausted;
  return result;
}

}  // namespace sabres
