#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace higgs {

using NodeId = std::uint32_t;
using LabelId = std::int32_t;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad configuration (CLI maps this to exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

// Malformed or inconsistent input data (CLI maps this to exit code 3).
struct DataError : Error {
  using Error::Error;
};

// Prints "warning: <message>" to stderr. Counted warnings are returned as
// tallies by the operations that produce them; this is only the log channel.
void warn(const std::string& message);

// 64-bit finalizer used for all seed derivation. Job seeds are
// mix64(master_seed, stage_id, job_index), repeat seeds are
// mix64(master_seed, repeat_index). Runs are reproducible from the master
// seed alone, independent of scheduling.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t seed, std::uint64_t a) {
  return splitmix64(seed ^ splitmix64(a));
}

constexpr std::uint64_t mix64(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(seed, a), b);
}

constexpr std::uint64_t mix64(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) {
  return mix64(mix64(seed, a, b), c);
}

// Deterministic generator with a platform-independent stream (splitmix64).
// std::mt19937 plus the std distributions are implementation-defined, which
// would break byte-identical reruns across toolchains, so sampling helpers
// are implemented here directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw Error("Rng::below called with n = 0");
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % n;
  }

  // Inclusive integer range.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller with a cached spare.
  double normal(double mean, double stddev);

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  // Index drawn proportionally to the given non-negative weights.
  std::size_t pick_weighted(std::span<const double> weights);

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t fnv1a64(std::string_view data);

// Shortest decimal form that parses back to the same double; keeps text
// formats diff-stable.
std::string format_double(double value);

}  // namespace higgs
