#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sabres/rng.hpp"

namespace sabres {

using Vector = std::vector<double>;

enum class BaseFunction { zakharov, rosenbrock, schaffer_f7, rastrigin, levy, sphere };

inline constexpr std::string_view to_string(BaseFunction f) {
  switch (f) {
    case BaseFunction::zakharov: return "zakharov";
    case BaseFunction::rosenbrock: return "rosenbrock";
    case BaseFunction::schaffer_f7: return "schaffer_f7";
    case BaseFunction::rastrigin: return "rastrigin";
    case BaseFunction::levy: return "levy";
    case BaseFunction::sphere: return "sphere";
  }
  return "?";
}

inline BaseFunction base_function_from_name(std::string_view name) {
  for (auto f : {BaseFunction::zakharov, BaseFunction::rosenbrock, BaseFunction::schaffer_f7,
                 BaseFunction::rastrigin, BaseFunction::levy, BaseFunction::sphere}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown base function: " + std::string(name));
}

// Textbook definitions. Zakharov, Schaffer F7, Rastrigin and sphere are
// minimized at the origin; Rosenbrock and Levy at (1, ..., 1).
namespace base {

inline double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

inline double zakharov(std::span<const double> x) {
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s1 += x[i] * x[i];
    s2 += 0.5 * static_cast<double>(i + 1) * x[i];
  }
  const double s2sq = s2 * s2;
  return s1 + s2sq + s2sq * s2sq;
}

inline double rosenbrock(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = x[i] - 1.0;
    s += 100.0 * a * a + b * b;
  }
  return s;
}

inline double rastrigin(std::span<const double> x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x) s += v * v - 10.0 * std::cos(two_pi * v);
  return s;
}

// Expanded Schaffer F7 over consecutive pairs. D = 1 uses the single term |x|.
inline double schaffer_f7(std::span<const double> x) {
  auto term = [](double s) { return std::sqrt(s) * (std::sin(50.0 * std::pow(s, 0.2)) + 1.0); };
  if (x.size() == 1) {
    const double t = term(std::abs(x[0]));
    return t * t;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    acc += term(std::hypot(x[i], x[i + 1]));
  }
  acc /= static_cast<double>(x.size() - 1);
  return acc * acc;
}

inline double levy(std::span<const double> x) {
  constexpr double pi = std::numbers::pi;
  const std::size_t d = x.size();
  auto w = [&](std::size_t i) { return 1.0 + (x[i] - 1.0) / 4.0; };
  const double s0 = std::sin(pi * w(0));
  double s = s0 * s0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    const double wi = w(i);
    const double si = std::sin(pi * wi + 1.0);
    s += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * si * si);
  }
  const double wd = w(d - 1);
  const double sd = std::sin(2.0 * pi * wd);
  s += (wd - 1.0) * (wd - 1.0) * (1.0 + sd * sd);
  return s;
}

}  // namespace base

inline double eval_base(BaseFunction f, std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("eval_base: empty input");
  for (double v : x) {
    if (std::isnan(v)) throw std::invalid_argument("eval_base: NaN in input");
  }
  switch (f) {
    case BaseFunction::zakharov: return base::zakharov(x);
    case BaseFunction::rosenbrock: return base::rosenbrock(x);
    case BaseFunction::schaffer_f7: return base::schaffer_f7(x);
    case BaseFunction::rastrigin: return base::rastrigin(x);
    case BaseFunction::levy: return base::levy(x);
    case BaseFunction::sphere: return base::sphere(x);
  }
  throw std::invalid_argument("eval_base: unknown function");
}

inline double eval_base(std::string_view name, std::span<const double> x) {
  return eval_base(base_function_from_name(name), x);
}

// Offset added to transformed coordinates so that z = 0 maps onto the
// function's minimizer.
inline constexpr double minimizer_offset(BaseFunction f) {
  return (f == BaseFunction::rosenbrock || f == BaseFunction::levy) ? 1.0 : 0.0;
}

// ---------------------------------------------------------------------------
// Shift / rotation

struct Bounds {
  double lower = -100.0;
  double upper = 100.0;

  double width() const { return upper - lower; }
  double clamp(double v) const { return std::clamp(v, lower, upper); }
};

/// z = scale * R * (x - shift), with R orthogonal and stored row-major.
struct TransformData {
  Vector shift;
  Vector rotation;
  double scale = 1.0;

  std::size_t dim() const { return shift.size(); }
  double r(std::size_t row, std::size_t col) const { return rotation[row * dim() + col]; }

  static TransformData identity(std::size_t dim) {
    TransformData t;
    t.shift.assign(dim, 0.0);
    t.rotation.assign(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) t.rotation[i * dim + i] = 1.0;
    return t;
  }
};

// max |R R^T - I|
inline double orthogonality_error(const TransformData& t) {
  const std::size_t d = t.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += t.r(i, k) * t.r(j, k);
      worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

inline void apply_transform(std::span<const double> x, const TransformData& t, std::span<double> out) {
  const std::size_t d = t.dim();
  if (x.size() != d || out.size() != d || t.rotation.size() != d * d) {
    throw std::invalid_argument("apply_transform: dimension mismatch");
  }
  // Small fixed-size scratch avoids allocating per evaluation.
  thread_local Vector diff;
  diff.resize(d);
  for (std::size_t i = 0; i < d; ++i) diff[i] = x[i] - t.shift[i];
  for (std::size_t i = 0; i < d; ++i) {
    const double* row = t.rotation.data() + i * d;
    double acc = 0.0;
    for (std::size_t k = 0; k < d; ++k) acc += row[k] * diff[k];
    out[i] = t.scale * acc;
  }
}

inline Vector apply_transform(std::span<const double> x, const TransformData& t) {
  Vector z(x.size());
  apply_transform(x, t, z);
  return z;
}

/// Shift uniform in the middle 80% of the box; rotation from modified
/// Gram-Schmidt (two passes) over a matrix of standard normals.
inline TransformData generate_transform(RandomStream& stream, std::size_t dim, Bounds box, double scale = 1.0) {
  if (dim == 0) throw std::invalid_argument("generate_transform: dim must be >= 1");
  TransformData t;
  t.scale = scale;
  t.shift.resize(dim);
  const double margin = 0.1 * box.width();
  for (auto& s : t.shift) s = stream.uniform(box.lower + margin, box.upper - margin);

  t.rotation.resize(dim * dim);
  for (auto& v : t.rotation) v = stream.standard_normal();
  auto row = [&](std::size_t i) { return std::span<double>(t.rotation.data() + i * dim, dim); };
  for (std::size_t i = 0; i < dim; ++i) {
    auto ri = row(i);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        auto rj = row(j);
        double dot = 0.0;
        for (std::size_t k = 0; k < dim; ++k) dot += ri[k] * rj[k];
        for (std::size_t k = 0; k < dim; ++k) ri[k] -= dot * rj[k];
      }
    }
    double norm = 0.0;
    for (double v : ri) norm += v * v;
    norm = std::sqrt(norm);
    for (auto& v : ri) v /= norm;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Transform files
//
//   line 1      D
//   line 2      D shift values
//   lines 3..   D rotation rows, D values each
//   last line   scale
//
// Values are whitespace separated. Blank lines are not allowed.

class TransformFileError : public std::runtime_error {
 public:
  enum class Kind { missing_file, parse, dimension_mismatch, not_orthogonal };

  TransformFileError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline constexpr double kLoadOrthogonalityTolerance = 1e-8;

inline TransformData parse_transform(std::istream& in, std::size_t dim, const std::string& origin = "<stream>") {
  using Kind = TransformFileError::Kind;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> TransformFileError {
    return TransformFileError(Kind::parse, origin + ":" + std::to_string(line_no) + ": " + msg);
  };
  auto read_values = [&](std::size_t expected) {
    std::string line;
    ++line_no;
    if (!std::getline(in, line)) throw fail("unexpected end of file");
    std::istringstream ls(line);
    Vector vals;
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') throw fail("not a number: '" + tok + "'");
      vals.push_back(v);
    }
    if (vals.size() != expected) {
      throw fail("expected " + std::to_string(expected) + " values, found " + std::to_string(vals.size()));
    }
    return vals;
  };

  const Vector header = read_values(1);
  if (header[0] < 1 || header[0] != std::floor(header[0])) throw fail("dimension must be a positive integer");
  const auto file_dim = static_cast<std::size_t>(header[0]);
  if (file_dim != dim) {
    throw TransformFileError(Kind::dimension_mismatch, origin + ": file has dimension " + std::to_string(file_dim) +
                                                           ", expected " + std::to_string(dim));
  }
  TransformData t;
  t.shift = read_values(dim);
  t.rotation.reserve(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const Vector row = read_values(dim);
    t.rotation.insert(t.rotation.end(), row.begin(), row.end());
  }
  t.scale = read_values(1)[0];
  if (!(t.scale > 0.0)) throw fail("scale must be positive");

  const double err = orthogonality_error(t);
  if (!(err <= kLoadOrthogonalityTolerance)) {
    std::ostringstream msg;
    msg << origin << ": rotation is not orthogonal (max |R R^T - I| = " << err << ")";
    throw TransformFileError(Kind::not_orthogonal, msg.str());
  }
  return t;
}

inline TransformData load_transform(const std::string& path, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw TransformFileError(TransformFileError::Kind::missing_file, path + ": cannot open file");
  return parse_transform(in, dim, path);
}

inline void write_transform(std::ostream& out, const TransformData& t) {
  const std::size_t d = t.dim();
  const auto old_precision = out.precision(17);
  out << d << '\n';
  for (std::size_t i = 0; i < d; ++i) out << (i ? " " : "") << t.shift[i];
  out << '\n';
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) out << (j ? " " : "") << t.r(i, j);
    out << '\n';
  }
  out << t.scale << '\n';
  out.precision(old_precision);
}

// ---------------------------------------------------------------------------
// Objectives

enum class ObjectiveKind { base, hybrid, composition };

struct HybridGroup {
  BaseFunction function;
  double fraction;
};

struct CompositionComponent {
  BaseFunction function;
  TransformData transform;
  double lambda = 1.0;
  double bias = 0.0;
  double sigma = 10.0;
};

struct ObjectiveSpec {
  std::string id;
  std::size_t dim = 0;
  Bounds bounds;
  double f_star = 0.0;
  ObjectiveKind kind = ObjectiveKind::base;

  BaseFunction function = BaseFunction::sphere;   // base kind
  std::optional<TransformData> transform;         // base and hybrid kinds
  std::vector<HybridGroup> groups;                // hybrid kind
  std::vector<CompositionComponent> components;   // composition kind

  // Point where the objective attains f_star.
  Vector optimizer() const;
};

namespace detail {

inline double eval_transformed(BaseFunction f, std::span<const double> x, const std::optional<TransformData>& t,
                               std::span<double> scratch) {
  if (t) {
    apply_transform(x, *t, scratch);
  } else {
    std::copy(x.begin(), x.end(), scratch.begin());
  }
  const double off = minimizer_offset(f);
  if (off != 0.0) {
    for (auto& v : scratch) v += off;
  }
  return eval_base(f, scratch);
}

}  // namespace detail

// Contiguous group sizes: ceil(fraction * D) for every group but the last,
// which takes the remainder. Groups may come out empty for tiny D.
inline std::vector<std::size_t> hybrid_group_sizes(std::span<const HybridGroup> groups, std::size_t dim) {
  std::vector<std::size_t> sizes;
  std::size_t used = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::size_t n;
    if (g + 1 == groups.size()) {
      n = dim - used;
    } else {
      n = static_cast<std::size_t>(std::ceil(groups[g].fraction * static_cast<double>(dim) - 1e-12));
      n = std::min(n, dim - used);
    }
    sizes.push_back(n);
    used += n;
  }
  return sizes;
}

// Normalized proximity weights: w_c ~ exp(-|x - o_c|^2 / (2 D sigma_c^2)) / |x - o_c|.
// A component whose shift coincides with x takes the full weight.
inline Vector composition_weights(std::span<const double> x, std::span<const CompositionComponent> comps) {
  const std::size_t d = x.size();
  Vector w(comps.size(), 0.0);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    double dist2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double diff = x[i] - comps[c].transform.shift[i];
      dist2 += diff * diff;
    }
    if (dist2 == 0.0) {
      std::fill(w.begin(), w.end(), 0.0);
      w[c] = 1.0;
      return w;
    }
    const double sigma = comps[c].sigma;
    w[c] = std::exp(-dist2 / (2.0 * static_cast<double>(d) * sigma * sigma)) / std::sqrt(dist2);
  }
  double total = 0.0;
  for (double v : w) total += v;
  if (total == 0.0) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(comps.size()));
  } else {
    for (auto& v : w) v /= total;
  }
  return w;
}

inline double eval_objective(const ObjectiveSpec& spec, std::span<const double> x) {
  if (x.size() != spec.dim) throw std::invalid_argument("eval_objective: dimension mismatch for " + spec.id);
  thread_local Vector scratch;
  scratch.resize(spec.dim);

  switch (spec.kind) {
    case ObjectiveKind::base:
      return detail::eval_transformed(spec.function, x, spec.transform, scratch) + spec.f_star;

    case ObjectiveKind::hybrid: {
      for (double v : x) {
        if (std::isnan(v)) throw std::invalid_argument("eval_objective: NaN in input");
      }
      if (spec.transform) {
        apply_transform(x, *spec.transform, scratch);
      } else {
        std::copy(x.begin(), x.end(), scratch.begin());
      }
      const auto sizes = hybrid_group_sizes(spec.groups, spec.dim);
      double total = 0.0;
      std::size_t start = 0;
      thread_local Vector part;
      for (std::size_t g = 0; g < spec.groups.size(); ++g) {
        if (sizes[g] == 0) continue;
        const auto f = spec.groups[g].function;
        part.assign(scratch.begin() + static_cast<std::ptrdiff_t>(start),
                    scratch.begin() + static_cast<std::ptrdiff_t>(start + sizes[g]));
        for (auto& v : part) v += minimizer_offset(f);
        total += eval_base(f, part);
        start += sizes[g];
      }
      return total + spec.f_star;
    }

    case ObjectiveKind::composition: {
      const Vector w = composition_weights(x, spec.components);
      double total = 0.0;
      for (std::size_t c = 0; c < spec.components.size(); ++c) {
        const auto& comp = spec.components[c];
        const double fc = detail::eval_transformed(comp.function, x, comp.transform, scratch);
        if (w[c] != 0.0) total += w[c] * (comp.lambda * fc + comp.bias);
      }
      return total + spec.f_star;
    }
  }
  throw std::logic_error("eval_objective: bad kind");
}

inline Vector ObjectiveSpec::optimizer() const {
  switch (kind) {
    case ObjectiveKind::base:
    case ObjectiveKind::hybrid:
      return transform ? transform->shift : Vector(dim, 0.0);
    case ObjectiveKind::composition:
      return components.front().transform.shift;
  }
  return Vector(dim, 0.0);
}

inline constexpr double kErrorFloor = 1e-8;
inline constexpr double kOptimumSlack = 1e-9;

class OptimumViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Error relative to the known optimum, floored at 1e-8.
inline double error_value(double f_val, double f_star) {
  if (f_val < f_star - kOptimumSlack) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "objective value " << f_val << " is below the known optimum " << f_star;
    throw OptimumViolation(msg.str());
  }
  return std::max(f_val - f_star, kErrorFloor);
}

// ---------------------------------------------------------------------------
// Registry

namespace detail {

inline RandomStream instance_stream(std::string_view id, std::size_t dim, std::uint64_t instance_seed) {
  return RandomStream(mix_seed(mix_seed(instance_seed, hash_label(id)), dim));
}

// Scaling applied inside the transform so the box covers the customary
// domain of each function.
inline double customary_scale(BaseFunction f) {
  switch (f) {
    case BaseFunction::rosenbrock: return 2.048 / 100.0;
    case BaseFunction::rastrigin: return 5.12 / 100.0;
    default: return 1.0;
  }
}

inline ObjectiveSpec make_shifted_rotated(std::string id, BaseFunction f, std::size_t dim, std::uint64_t seed) {
  ObjectiveSpec spec;
  spec.id = std::move(id);
  spec.dim = dim;
  spec.kind = ObjectiveKind::base;
  spec.function = f;
  auto stream = instance_stream(spec.id, dim, seed);
  spec.transform = generate_transform(stream, dim, spec.bounds, customary_scale(f));
  return spec;
}

inline ObjectiveSpec make_plain(std::string id, BaseFunction f, std::size_t dim) {
  ObjectiveSpec spec;
  spec.id = std::move(id);
  spec.dim = dim;
  spec.kind = ObjectiveKind::base;
  spec.function = f;
  return spec;
}

inline ObjectiveSpec make_hybrid(std::string id, std::vector<HybridGroup> groups, std::size_t dim, std::uint64_t seed) {
  ObjectiveSpec spec;
  spec.id = std::move(id);
  spec.dim = dim;
  spec.kind = ObjectiveKind::hybrid;
  spec.groups = std::move(groups);
  auto stream = instance_stream(spec.id, dim, seed);
  spec.transform = generate_transform(stream, dim, spec.bounds, 1.0);
  return spec;
}

struct ComponentParams {
  BaseFunction function;
  double lambda;
  double bias;
  double sigma;
};

inline ObjectiveSpec make_composition(std::string id, std::span<const ComponentParams> params, std::size_t dim,
                                      std::uint64_t seed) {
  ObjectiveSpec spec;
  spec.id = std::move(id);
  spec.dim = dim;
  spec.kind = ObjectiveKind::composition;
  auto stream = instance_stream(spec.id, dim, seed);
  for (std::size_t c = 0; c < params.size(); ++c) {
    auto sub = stream.derive(c);
    const auto& p = params[c];
    spec.components.push_back({p.function, generate_transform(sub, dim, spec.bounds, customary_scale(p.function)),
                               p.lambda, p.bias, p.sigma});
  }
  return spec;
}

}  // namespace detail

/// Seed used to generate shift/rotation data for registry instances. Fixed so
/// that a function id names the same landscape in every run.
inline constexpr std::uint64_t kDefaultInstanceSeed = 2022;

using ObjectiveFactory = std::function<ObjectiveSpec(std::size_t dim, std::uint64_t instance_seed)>;

/// Two basins: a narrow global one (component 0) and a broad shallow local
/// one (component 1), at fixed, widely separated locations in 2-D.
inline ObjectiveSpec make_two_basin_composition(std::size_t dim = 2) {
  ObjectiveSpec spec;
  spec.id = "composition2d";
  spec.dim = dim;
  spec.kind = ObjectiveKind::composition;
  TransformData global = TransformData::identity(dim);
  TransformData local = TransformData::identity(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    global.shift[i] = (i % 2 == 0) ? -60.0 : 45.0;
    local.shift[i] = (i % 2 == 0) ? 50.0 : -40.0;
  }
  spec.components.push_back({BaseFunction::sphere, global, 1.0, 0.0, 10.0});
  spec.components.push_back({BaseFunction::sphere, local, 0.01, 100.0, 40.0});
  return spec;
}

inline const std::map<std::string, ObjectiveFactory>& registry() {
  using detail::ComponentParams;
  using BF = BaseFunction;
  static const std::map<std::string, ObjectiveFactory> table = [] {
    std::map<std::string, ObjectiveFactory> t;
    auto shifted = [&](std::string id, BF f) {
      t[id] = [id, f](std::size_t d, std::uint64_t s) { return detail::make_shifted_rotated(id, f, d, s); };
    };
    shifted("f1", BF::zakharov);
    shifted("f2", BF::rosenbrock);
    shifted("f3", BF::schaffer_f7);
    shifted("f4", BF::rastrigin);
    shifted("f5", BF::levy);

    auto hybrid = [&](std::string id, std::vector<HybridGroup> groups) {
      t[id] = [id, groups](std::size_t d, std::uint64_t s) { return detail::make_hybrid(id, groups, d, s); };
    };
    hybrid("f6", {{BF::sphere, 0.4}, {BF::rastrigin, 0.4}, {BF::levy, 0.2}});
    hybrid("f7", {{BF::zakharov, 0.1}, {BF::rosenbrock, 0.2}, {BF::levy, 0.2}, {BF::rastrigin, 0.2},
                  {BF::sphere, 0.3}});
    hybrid("f8", {{BF::schaffer_f7, 0.3}, {BF::rastrigin, 0.2}, {BF::rosenbrock, 0.2}, {BF::sphere, 0.3}});

    auto composition = [&](std::string id, std::vector<ComponentParams> params) {
      t[id] = [id, params](std::size_t d, std::uint64_t s) { return detail::make_composition(id, params, d, s); };
    };
    composition("f9", {{BF::rosenbrock, 1.0, 0.0, 10.0},
                       {BF::sphere, 1e-6, 200.0, 20.0},
                       {BF::zakharov, 1e-6, 300.0, 30.0},
                       {BF::sphere, 1e-6, 100.0, 40.0},
                       {BF::sphere, 1e-6, 400.0, 50.0}});
    composition("f10", {{BF::schaffer_f7, 1.0, 0.0, 20.0}, {BF::rastrigin, 1.0, 200.0, 10.0},
                        {BF::sphere, 1.0, 100.0, 10.0}});
    composition("f11", {{BF::zakharov, 5e-4, 0.0, 20.0}, {BF::rastrigin, 1.0, 200.0, 20.0},
                        {BF::levy, 10.0, 300.0, 30.0}, {BF::rosenbrock, 1.0, 400.0, 30.0},
                        {BF::sphere, 5e-4, 300.0, 20.0}});
    composition("f12", {{BF::rastrigin, 10.0, 0.0, 10.0}, {BF::levy, 10.0, 300.0, 20.0},
                        {BF::zakharov, 2.5, 500.0, 30.0}, {BF::schaffer_f7, 1e-26, 100.0, 40.0},
                        {BF::sphere, 1e-6, 400.0, 50.0}, {BF::sphere, 1e-6, 200.0, 60.0}});

    for (auto f : {BF::sphere, BF::zakharov, BF::rosenbrock, BF::schaffer_f7, BF::rastrigin, BF::levy}) {
      const std::string id(to_string(f));
      t[id] = [id, f](std::size_t d, std::uint64_t) { return detail::make_plain(id, f, d); };
    }
    t["composition2d"] = [](std::size_t d, std::uint64_t) { return make_two_basin_composition(d); };
    return t;
  }();
  return table;
}

inline std::vector<std::string> registry_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : registry()) ids.push_back(id);
  return ids;
}

inline ObjectiveSpec make_objective(const std::string& id, std::size_t dim,
                                    std::uint64_t instance_seed = kDefaultInstanceSeed) {
  if (dim == 0) throw std::invalid_argument("make_objective: dim must be >= 1");
  const auto& table = registry();
  const auto it = table.find(id);
  if (it == table.end()) {
    std::string known;
    for (const auto& [k, _] : table) known += (known.empty() ? "" : ", ") + k;
    throw std::invalid_argument("unknown function id '" + id + "' (known: " + known + ")");
  }
  return it->second(dim, instance_seed);
}

}  // namespace sabres
