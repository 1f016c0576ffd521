#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string_view>
#include <vector>

namespace typicality {

// 64-bit FNV-1a, used to fold substream names into seed material.
constexpr std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace detail

// Deterministic random stream. Gaussian deviates are produced by Box-Muller
// on top of mt19937_64, not std::normal_distribution, whose algorithm the
// standard leaves implementation-defined; this keeps output identical across
// standard libraries for a fixed seed.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0, 1]; never 0, so log() is safe.
  double uniform01() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal deviate.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform01()));
    const double angle = 2.0 * std::numbers::pi * uniform01();
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // Unbiased integer in [0, n), by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // k distinct indices from [0, n), via partial Fisher-Yates.
  std::vector<std::size_t> sample_without_replacement(std::size_t k, std::size_t n) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[i + below(n - i)]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Seed for the named substream of a master seed. Distinct (name, index)
// pairs yield unrelated values.
inline std::uint64_t derive_seed(std::uint64_t master_seed,
                                 std::string_view name,
                                 std::uint64_t index = 0) {
  std::uint64_t s = detail::splitmix64(master_seed ^ fnv1a(name));
  return detail::splitmix64(s ^ index);
}

// Named substream of a master seed, so concurrent or reordered consumers
// cannot perturb each other's draws.
inline RandomStream substream(std::uint64_t master_seed, std::string_view name,
                              std::uint64_t index = 0) {
  return RandomStream(derive_seed(master_seed, name, index));
}

}  // namespace typicality
