#pragma once

#include <cstdint>
#include <numeric>
#include <string_view>
#include <vector>

namespace veriscale {

// Deterministic RNG used everywhere randomness is needed. Not std::mt19937 +
// std::uniform_*_distribution: the standard leaves distribution output
// unspecified, and results here must be bit-identical across platforms and
// releases. splitmix64 is small, fast, and fully pinned down.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // Decorrelate trivially related seeds (0, 1, 2, ...).
    next();
  }

  std::uint64_t next() { return splitmix64(state_); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Unbiased integer in [0, n) via rejection sampling.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // k distinct indices drawn uniformly from [0, n) (partial Fisher-Yates).
  std::vector<int> sample_indices(int n, int k) {
    scratch_.resize(static_cast<std::size_t>(n));
    std::iota(scratch_.begin(), scratch_.end(), 0);
    std::vector<int> out(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const auto j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
      std::swap(scratch_[i], scratch_[j]);
      out[static_cast<std::size_t>(i)] = scratch_[i];
    }
    return out;
  }

  // Uniform permutation of 0..n-1.
  std::vector<int> permutation(int n) { return sample_indices(n, n); }

 private:
  std::uint64_t state_;
  std::vector<int> scratch_;
};

// Stream derivation: estimators draw one stream per (seed, problem_id) so
// results do not depend on evaluation or scheduling order.
inline Rng derive_rng(std::uint64_t seed, std::string_view stream_tag) {
  std::uint64_t s = seed;
  return Rng(splitmix64(s) ^ fnv1a64(stream_tag));
}

}  // namespace veriscale
