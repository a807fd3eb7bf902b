#include "doctest.h"

#include <cmath>

#include "test_support.hpp"
#include "veriscale/scaling.hpp"
#include "veriscale/synth.hpp"

using namespace veriscale;

namespace {

Curve make_curve(std::string label, std::vector<CurvePoint> points) {
  Curve curve;
  curve.label = std::move(label);
  curve.points = std::move(points);
  return curve;
}

}  // namespace

TEST_SUITE("scaling") {
  TEST_CASE("power-law fit through two points is exact") {
    const PowerLawFit fit = fit_power_law({{1.0, 1.0}, {4.0, 8.0}});
    CHECK(fit.exponent == 1.5);
    CHECK(fit.log_coefficient == 0.0);
    CHECK(fit.r_squared == 1.0);
    CHECK(fit.n_points == 2);
    CHECK(!fit.zero_variance);
  }

  TEST_CASE("power-law fit recovers a generated law") {
    std::vector<std::pair<double, double>> points;
    for (int i = 0; i <= 10; ++i) {
      const double x = std::exp2(i);
      points.push_back({x, 3.0 * std::sqrt(x)});
    }
    const PowerLawFit fit = fit_power_law(points);
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fit.log_coefficient == doctest::Approx(std::log2(3.0)).epsilon(1e-9));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.n_points == 11);
  }

  TEST_CASE("constant y is flagged instead of dividing by zero") {
    const PowerLawFit fit = fit_power_law({{1.0, 5.0}, {2.0, 5.0}, {8.0, 5.0}});
    CHECK(fit.zero_variance);
    CHECK(fit.exponent == 0.0);
    CHECK(fit.r_squared == 1.0);
    CHECK(fit.log_coefficient == std::log2(5.0));
  }

  TEST_CASE("fit input validation") {
    CHECK_THROWS_AS(fit_power_law({{1.0, 1.0}}), std::domain_error);
    CHECK_THROWS_AS(fit_power_law({{1.0, 1.0}, {2.0, 0.0}}), std::domain_error);
    CHECK_THROWS_AS(fit_power_law({{0.0, 1.0}, {2.0, 1.0}}), std::domain_error);
    CHECK_THROWS_AS(fit_power_law({{-1.0, 1.0}, {2.0, 1.0}}), std::domain_error);
    CHECK_THROWS_AS(fit_power_law({{2.0, 1.0}, {2.0, 3.0}}), std::domain_error);
  }

  TEST_CASE("fit exponent is invariant under axis rescaling") {
    Rng rng(23);
    std::vector<std::pair<double, double>> points;
    for (int i = 1; i <= 12; ++i) {
      const double x = std::exp2(i);
      points.push_back({x, 0.7 * std::pow(x, 0.43) * (1.0 + 0.05 * rng.uniform())});
    }
    const PowerLawFit base = fit_power_law(points);
    auto scaled_x = points;
    for (auto& [x, y] : scaled_x) x *= 16.0;
    const PowerLawFit fx = fit_power_law(scaled_x);
    CHECK(fx.exponent == doctest::Approx(base.exponent).epsilon(1e-9));
    CHECK(fx.log_coefficient ==
          doctest::Approx(base.log_coefficient - 4.0 * base.exponent).epsilon(1e-9));
    auto scaled_y = points;
    for (auto& [x, y] : scaled_y) y *= 8.0;
    const PowerLawFit fy = fit_power_law(scaled_y);
    CHECK(fy.exponent == doctest::Approx(base.exponent).epsilon(1e-9));
    CHECK(fy.log_coefficient == doctest::Approx(base.log_coefficient + 3.0).epsilon(1e-9));
    CHECK(fy.r_squared == doctest::Approx(base.r_squared).epsilon(1e-9));
  }

  TEST_CASE("optimal trend reads the winning curve's fixed coordinate") {
    const std::vector<Curve> fixed_s = {
        make_curve("S=4", {{2, 0.5, 4, 1}, {3, 0.6, 4, 2}, {5, 0.7, 4, 4}})};
    const auto trend = optimal_trend(fixed_s, {2.0, 3.0, 5.0}, TrendAxis::solutions);
    REQUIRE(trend.size() == 3);
    for (const auto& t : trend) CHECK(t.opt_value == 4);
    CHECK(trend[0].budget == 2.0);

    const std::vector<Curve> fixed_v = {
        make_curve("V=1", {{2, 0.5, 1, 1}, {4, 0.9, 2, 1}}),
        make_curve("V=2", {{3, 0.8, 1, 2}, {6, 0.85, 2, 2}}),
    };
    const auto tv = optimal_trend(fixed_v, {2.0, 3.0, 4.0}, TrendAxis::verifications);
    REQUIRE(tv.size() == 3);
    CHECK(tv[0].opt_value == 1);  // only V=1 affordable
    CHECK(tv[1].opt_value == 2);  // V=2 enters at 0.8 vs V=1 interpolated below it
    CHECK(tv[2].opt_value == 1);  // V=1 reaches 0.9 at its knot
  }

  TEST_CASE("scaling report on a small synthetic dataset") {
    SynthConfig config;
    config.n_problems = 6;
    config.n_solutions = 8;
    config.n_verifications = 4;
    config.seed = 12;
    const Dataset ds = generate(config);
    ComputeParams params;
    EstimatorConfig cfg;
    cfg.mode = SamplingMode::exhaustive;
    ScalingOptions options;
    options.n_budgets = 8;
    const ScalingReport report = scaling_report(ds, params, cfg, options);
    REQUIRE(report.trend_s.size() == 8);
    REQUIRE(report.trend_v.size() == 8);
    CHECK(report.fit_s.n_points == 8);
    CHECK(report.fit_v.n_points == 8);
    CHECK(report.solutions_scale_faster == (report.fit_s.exponent > report.fit_v.exponent));
    // Trend budgets span the lattice corners.
    CHECK(report.trend_s.front().budget == budget(1, 1, params));
    CHECK(report.trend_s.back().budget == budget(8, 4, params));
    for (const auto& t : report.trend_s) {
      CHECK(t.opt_value >= 1);
      CHECK(t.opt_value <= 8);
    }
    for (const auto& t : report.trend_v) {
      CHECK(t.opt_value >= 1);
      CHECK(t.opt_value <= 4);
    }
    // Non-decreasing trend values are expected on well-behaved synthetic
    // data but are not guaranteed; flag dips without failing.
    for (std::size_t i = 1; i < report.trend_s.size(); ++i) {
      WARN_MESSAGE(report.trend_s[i].opt_value >= report.trend_s[i - 1].opt_value,
                   "solutions trend dips at budget " << report.trend_s[i].budget);
    }
    // The run is deterministic.
    const ScalingReport again = scaling_report(ds, params, cfg, options);
    CHECK(again.fit_s.exponent == report.fit_s.exponent);
    CHECK(again.fit_v.exponent == report.fit_v.exponent);
  }

  TEST_CASE("scaling report validates its options") {
    SynthConfig config;
    config.n_problems = 3;
    config.n_solutions = 4;
    config.n_verifications = 2;
    const Dataset ds = generate(config);
    ComputeParams params;
    EstimatorConfig cfg;
    ScalingOptions options;
    options.n_budgets = 1;
    CHECK_THROWS_AS(scaling_report(ds, params, cfg, options), std::domain_error);
    options.n_budgets = 8;
    options.v_grid = {1};
    CHECK_THROWS_AS(scaling_report(ds, params, cfg, options), std::domain_error);
  }
}
