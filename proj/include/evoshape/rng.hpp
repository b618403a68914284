#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace evoshape {

/// Seedable stream of random draws backed by mt19937_64.
///
/// The same seed replays the same sequence within one build of this library;
/// no bit-compatibility across standard-library implementations is promised.
/// The seed is the serializable handle recorded alongside every run.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform real in [lo, hi).
  double uniform_real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  /// Uniform integer in [lo, hi], both ends inclusive.
  int uniform_int(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }

  /// k distinct indices drawn from [0, n) by partial Fisher-Yates; the order
  /// of the returned indices is itself random.
  std::vector<int> choice_without_replacement(int n, int k) {
    if (k < 0 || k > n)
      throw std::invalid_argument("choice_without_replacement: need 0 <= k <= n");
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
      const int j = uniform_int(i, n - 1);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(k));
    return pool;
  }

  /// Standard normal draw.
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-run seed derivation: absorbs (image index, target class, config index)
/// into the master seed with splitmix64 rounds. Order-independent with respect
/// to execution schedule, so parallel sweeps replay exactly.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t image_index,
                                 std::uint64_t target_class, std::uint64_t config_index) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ image_index);
  s = splitmix64(s ^ target_class);
  s = splitmix64(s ^ config_index);
  return s;
}

} // namespace evoshape
