#pragma once

#include <stdexcept>
#include <vector>

namespace veriscale {

using uint128 = unsigned __int128;

// Largest n for which C(n, k) is tabulated. C(128, 64) ~= 2.4e38 fits in an
// unsigned 128-bit integer (max ~3.4e38); beyond that the table would
// overflow, so choose() throws.
inline constexpr int kMaxChooseN = 128;

namespace detail {

inline const std::vector<std::vector<uint128>>& pascal_table() {
  static const std::vector<std::vector<uint128>> table = [] {
    std::vector<std::vector<uint128>> t(kMaxChooseN + 1);
    for (int n = 0; n <= kMaxChooseN; ++n) {
      t[n].resize(static_cast<std::size_t>(n) + 1);
      t[n][0] = 1;
      t[n][static_cast<std::size_t>(n)] = 1;
      for (int k = 1; k < n; ++k) {
        t[n][static_cast<std::size_t>(k)] =
            t[n - 1][static_cast<std::size_t>(k - 1)] + t[n - 1][static_cast<std::size_t>(k)];
      }
    }
    return t;
  }();
  return table;
}

}  // namespace detail

// Exact binomial coefficient C(n, k). Throws std::domain_error for n beyond
// the exact range; callers that can exceed it must bound n first.
inline uint128 choose(int n, int k) {
  if (n < 0) throw std::domain_error("choose: n must be non-negative");
  if (k < 0 || k > n) return 0;
  if (n > kMaxChooseN)
    throw std::domain_error("choose: n exceeds exact range (max 128)");
  return detail::pascal_table()[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

inline double choose_double(int n, int k) { return static_cast<double>(choose(n, k)); }

}  // namespace veriscale
