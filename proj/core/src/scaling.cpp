#include "veriscale/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace veriscale {

std::vector<TrendPoint> optimal_trend(const std::vector<Curve>& curves,
                                      const std::vector<double>& budgets, TrendAxis axis,
                                      bool extrapolate_flat) {
  std::vector<TrendPoint> trend;
  trend.reserve(budgets.size());
  for (double c : budgets) {
    const OptimalAllocation alloc = optimal_allocation(curves, c, extrapolate_flat);
    trend.push_back({c, axis == TrendAxis::solutions ? alloc.s_opt : alloc.v_opt});
  }
  return trend;
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw std::domain_error("power-law fit needs at least 2 points");
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0))
      throw std::domain_error("power-law fit requires strictly positive points");
  }
  const bool x_degenerate =
      std::all_of(points.begin(), points.end(),
                  [&](const auto& p) { return p.first == points.front().first; });
  if (x_degenerate) throw std::domain_error("power-law fit requires at least 2 distinct x values");

  PowerLawFit fit;
  fit.n_points = static_cast<int>(points.size());

  const std::size_t n = points.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = std::log2(points[i].first);
    ys[i] = std::log2(points[i].second);
  }
  // Constant y: slope is 0 by definition; r_squared has no residual variance
  // to explain and is reported as 1 with the flag set.
  if (std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); })) {
    fit.exponent = 0.0;
    fit.log_coefficient = ys.front();
    fit.r_squared = 1.0;
    fit.zero_variance = true;
    return fit;
  }

  double x_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x_mean += xs[i];
    y_mean += ys[i];
  }
  x_mean /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - x_mean;
    const double dy = ys[i] - y_mean;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.exponent = sxy / sxx;
  fit.log_coefficient = y_mean - fit.exponent * x_mean;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.log_coefficient + fit.exponent * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = 1.0 - ss_res / syy;
  return fit;
}

ScalingReport scaling_report(const Dataset& dataset, const ComputeParams& params,
                             const EstimatorConfig& cfg, const ScalingOptions& options) {
  params.validate();
  cfg.validate();
  if (options.n_budgets < 2) throw std::domain_error("need at least 2 trend budgets");
  std::vector<int> s_grid = options.s_grid.empty() ? pow2_grid(dataset.usable_solutions())
                                                   : options.s_grid;
  std::vector<int> v_grid = options.v_grid.empty() ? pow2_grid(dataset.usable_verifications())
                                                   : options.v_grid;
  std::sort(s_grid.begin(), s_grid.end());
  s_grid.erase(std::unique(s_grid.begin(), s_grid.end()), s_grid.end());
  std::sort(v_grid.begin(), v_grid.end());
  v_grid.erase(std::unique(v_grid.begin(), v_grid.end()), v_grid.end());
  if (s_grid.size() < 2 || v_grid.size() < 2)
    throw std::domain_error("scaling report needs >= 2 distinct s and v values");

  // One success-rate evaluation per lattice cell, shared by both families.
  const std::size_t ns = s_grid.size();
  const std::size_t nv = v_grid.size();
  std::vector<std::vector<double>> sr(ns, std::vector<double>(nv));
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      sr[i][j] = genrm_success_rate(dataset, s_grid[i], v_grid[j], cfg);
    }
  }

  std::vector<Curve> fixed_s;
  for (std::size_t i = 0; i < ns; ++i) {
    Curve curve;
    curve.label = "S=" + std::to_string(s_grid[i]);
    for (std::size_t j = 0; j < nv; ++j)
      curve.points.push_back({budget(s_grid[i], v_grid[j], params), sr[i][j], s_grid[i], v_grid[j]});
    fixed_s.push_back(std::move(curve));
  }
  std::vector<Curve> fixed_v;
  for (std::size_t j = 0; j < nv; ++j) {
    Curve curve;
    curve.label = "V=" + std::to_string(v_grid[j]);
    for (std::size_t i = 0; i < ns; ++i)
      curve.points.push_back({budget(s_grid[i], v_grid[j], params), sr[i][j], s_grid[i], v_grid[j]});
    fixed_v.push_back(std::move(curve));
  }
  if (options.smooth_window > 1) {
    for (auto& curve : fixed_s) curve = smooth(curve, options.smooth_window);
    for (auto& curve : fixed_v) curve = smooth(curve, options.smooth_window);
  }

  // Both families span the same lattice corners.
  const double lo = budget(s_grid.front(), v_grid.front(), params);
  const double hi = budget(s_grid.back(), v_grid.back(), params);
  const std::vector<double> budgets = geometric_budgets(lo, hi, options.n_budgets);

  ScalingReport report;
  report.trend_s =
      optimal_trend(fixed_s, budgets, TrendAxis::solutions, options.extrapolate_flat);
  report.trend_v =
      optimal_trend(fixed_v, budgets, TrendAxis::verifications, options.extrapolate_flat);
  std::vector<std::pair<double, double>> pts_s, pts_v;
  for (const auto& t : report.trend_s)
    pts_s.emplace_back(t.budget, static_cast<double>(t.opt_value));
  for (const auto& t : report.trend_v)
    pts_v.emplace_back(t.budget, static_cast<double>(t.opt_value));
  report.fit_s = fit_power_law(pts_s);
  report.fit_v = fit_power_law(pts_v);
  report.solutions_scale_faster = report.fit_s.exponent > report.fit_v.exponent;
  return report;
}

}  // namespace veriscale
