#pragma once

#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sabres {

// SplitMix64 finalizer. Used for seed expansion and sub-stream derivation.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Combines a seed with a label into a new seed. Order sensitive:
// mix_seed(a, b) != mix_seed(b, a) in general.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t label) noexcept {
  return splitmix64(splitmix64(seed) ^ (label * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
}

// FNV-1a, for turning string labels (function ids) into seed labels.
constexpr std::uint64_t hash_label(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Seeded deterministic random source.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the C++
/// standard. All real-valued transforms are implemented here rather than
/// through <random> distributions, whose algorithms are implementation
/// defined, so a seed reproduces a run bit-for-bit across standard libraries.
///
/// Not thread-safe. Use derive() to hand each thread or trial its own stream.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  // Independent child stream, deterministic in (seed, label).
  RandomStream derive(std::uint64_t label) const { return RandomStream(mix_seed(seed_, label)); }
  RandomStream derive(std::uint64_t a, std::uint64_t b) const {
    return RandomStream(mix_seed(mix_seed(seed_, a), b));
  }

  std::uint64_t next_u64() { return engine_(); }

  // 53-bit uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("uniform: lo > hi");
    if (lo == hi) return lo;
    const double v = lo + (hi - lo) * unit();
    // Rounding can land exactly on hi for wide intervals.
    return v < hi ? v : std::nextafter(hi, lo);
  }

  // Marsaglia polar method; the second variate of each pair is cached.
  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * unit() - 1.0;
      v = 2.0 * unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

  // Unbiased integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("below: empty range");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform over [0, n) \ {excluded}.
  std::size_t index_excluding(std::size_t n, std::size_t excluded) {
    if (n < 2) throw std::invalid_argument("index_excluding: need n >= 2");
    if (excluded >= n) throw std::invalid_argument("index_excluding: excluded index out of range");
    const auto r = static_cast<std::size_t>(below(n - 1));
    return r >= excluded ? r + 1 : r;
  }

  friend std::ostream& operator<<(std::ostream& os, const RandomStream& s) {
    const auto flags = os.flags();
    os << s.seed_ << ' ' << s.has_spare_ << ' ' << std::hexfloat << s.spare_ << ' ';
    os.flags(flags);
    return os << s.engine_;
  }

  friend std::istream& operator>>(std::istream& is, RandomStream& s) {
    std::string spare;
    is >> s.seed_ >> s.has_spare_ >> spare >> s.engine_;
    if (is) s.spare_ = std::strtod(spare.c_str(), nullptr);
    return is;
  }

  friend bool operator==(const RandomStream& a, const RandomStream& b) {
    return a.seed_ == b.seed_ && a.has_spare_ == b.has_spare_ &&
           (!a.has_spare_ || a.spare_ == b.spare_) && a.engine_ == b.engine_;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline RandomStream new_stream(std::uint64_t seed) { return RandomStream(seed); }

}  // namespace sabres
