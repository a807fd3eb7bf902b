#include "veriscale/compute.hpp"

#include <algorithm>
#include <cmath>

namespace veriscale {

std::vector<int> pow2_grid(int limit) {
  std::vector<int> out;
  for (int x = 1; x <= limit; x *= 2) {
    out.push_back(x);
    if (x > limit / 2) break;  // avoid overflow on the doubling step
  }
  return out;
}

std::vector<double> budget_grid(int max_s, int max_v, const ComputeParams& params) {
  params.validate();
  std::vector<double> budgets;
  std::vector<int> v_values{0};
  for (int v : pow2_grid(max_v)) v_values.push_back(v);
  for (int s : pow2_grid(max_s)) {
    for (int v : v_values) budgets.push_back(budget(s, v, params));
  }
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
  return budgets;
}

std::vector<double> geometric_budgets(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw std::domain_error("budgets must be positive");
  if (hi < lo) throw std::domain_error("budget range is inverted");
  if (n < 1) throw std::domain_error("need at least one budget");
  if (n == 1 || hi == lo) return {lo};
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  const double log_lo = std::log2(lo);
  const double log_hi = std::log2(hi);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    out.push_back(std::exp2(log_lo + t * (log_hi - log_lo)));
  }
  // Pin the endpoints so range checks never fail to rounding.
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace veriscale
