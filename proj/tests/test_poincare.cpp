#include <gtest/gtest.h>

#include <numbers>

#include "test_support.hpp"
#include "uvstab/poincare.hpp"

using namespace uvstab;

namespace {

constexpr double kPi = std::numbers::pi;

VehicleParams family(double i1) { return VehicleParams(Vec3(i1, 1.0 - i1, 1.0), Vec3(1, 2, 3)); }

SectionSpec spec_with(double a, double alpha = 1.0) {
  SectionSpec s;
  s.alpha_e = alpha;
  s.a = a;
  s.I_grid = default_action_grid(a);
  return s;
}

}  // namespace

TEST(SectionSpec, Validation) {
  SectionSpec s = spec_with(1e-2);
  EXPECT_NO_THROW(s.validate());
  s.a = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = spec_with(1e-2);
  s.I_grid = {0.2};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = spec_with(1e-2);
  s.n_returns = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(MeasureActionAngle, CenterScalingAndOrientation) {
  const NormalFormCoeffs c = coefficients(VehicleParams(Vec3(1, 2, 3), Vec3(1, 2, 3)), 3.0);
  const ActionAngle center = measure_action_angle({Vec3(0, 0, 3), Vec3::Zero()}, c);
  EXPECT_EQ(center.action, 0.0);
  EXPECT_EQ(center.angle, 0.0);

  const double I0 = 2e-3;
  const double px = std::sqrt(2 * I0 * 3.0) * std::pow(c.D, -0.25);
  const ActionAngle x = measure_action_angle({Vec3(px, 0, 3), Vec3::Zero()}, c);
  EXPECT_NEAR(x.action, I0, 1e-17);
  EXPECT_NEAR(x.angle, 0.0, 1e-15);

  const double py = std::sqrt(2 * I0 * 3.0) * std::pow(c.D, 0.25);
  const ActionAngle y = measure_action_angle({Vec3(0, py, 3), Vec3::Zero()}, c);
  EXPECT_NEAR(y.action, I0, 1e-17);
  EXPECT_NEAR(y.angle, kPi / 2, 1e-15);

  uvstab::testing::Gen gen(51);
  for (int k = 0; k < 200; ++k) {
    const Vec3 pi(gen.uniform(-0.1, 0.1), gen.uniform(-0.1, 0.1), 3.0);
    const double scale = gen.uniform(0.1, 3.0);
    const Vec3 scaled(scale * pi[0], scale * pi[1], 3.0);
    ASSERT_NEAR(measure_action_angle({scaled, Vec3::Zero()}, c).action,
                scale * scale * measure_action_angle({pi, Vec3::Zero()}, c).action, 1e-15);
  }
}

TEST(SectionInitialState, LiesOnTheEquilibriumLevel) {
  for (double theta : {0.4, kPi / 2, 2.0}) {
    SectionSpec s = spec_with(1e-2, 1.5);
    s.theta = theta;
    const VehicleParams params(Vec3(1, 2, 3), Vec3(1, 2, 3));
    const NormalFormCoeffs c = coefficients(params, 1.5);
    for (double I0 : {0.0, 1e-4, 5e-3}) {
      const PoissonState x = section_initial_state(s, params, I0);
      const Vec3 w(std::sin(theta), 0, std::cos(theta));
      EXPECT_NEAR(x.p.norm(), 1e-2, 1e-17);
      EXPECT_NEAR(x.pi.dot(w), 1.5 * std::cos(theta), 1e-14);
      const double rigid = 0.5 * x.pi.dot(params.inertia().cwiseInverse().cwiseProduct(x.pi));
      EXPECT_NEAR(rigid, 1.5 * 1.5 / 6.0, 1e-14);
      // Off theta = pi/2 the energy correction tilts pi_x, which moves the
      // leading-order action by O(I0^2).
      const ActionAngle m = measure_action_angle(x, c);
      if (theta == kPi / 2) {
        EXPECT_NEAR(m.action, I0, 1e-15);
        if (I0 > 0) {
          EXPECT_NEAR(m.angle, kPi / 2, 1e-15);
        }
      } else {
        EXPECT_LE(std::abs(m.action - I0), 100.0 * I0 * I0);
      }
    }
  }
}

TEST(PoincareMap, ReturnTimeAndZeroOrderRotation) {
  const VehicleParams params(Vec3(1, 2, 3), Vec3(1, 2, 3));
  SectionSpec s = spec_with(1e-3, 3.0);
  s.I_grid = {1e-8};
  const auto samples = poincare_map(s, params, IntegratorConfig{});
  ASSERT_EQ(samples.size(), 1u);
  ASSERT_TRUE(samples[0].valid);
  EXPECT_NEAR(samples[0].T_measured, 2 * kPi, 1e-3);
  const NormalFormCoeffs c = coefficients(params, 3.0);
  const double zero_order = -2 * kPi * c.omega_e / c.xi_e;
  EXPECT_NEAR(std::remainder(samples[0].dpsi - zero_order, 2 * kPi), 0.0, 1e-2);
}

TEST(PoincareMap, Deterministic) {
  const SectionSpec s = spec_with(1e-2);
  const auto one = poincare_map(s, family(0.35), IntegratorConfig{});
  const auto two = poincare_map(s, family(0.35), IntegratorConfig{});
  ASSERT_EQ(one.size(), two.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].I_measured, two[i].I_measured);
    EXPECT_EQ(one[i].dpsi, two[i].dpsi);
    EXPECT_EQ(one[i].T_measured, two[i].T_measured);
    EXPECT_EQ(one[i].valid, two[i].valid);
  }
}

TEST(PoincareMap, ActionDriftIsSuperlinearInA) {
  const VehicleParams params = family(0.3);
  const double big = trace_orbit(spec_with(1e-2), params, 0.5e-2, IntegratorConfig{}).max_action_jump();
  const double small = trace_orbit(spec_with(0.5e-2), params, 0.25e-2, IntegratorConfig{}).max_action_jump();
  EXPECT_GT(big / small, 4.0) << "exponent " << std::log2(big / small);
}

TEST(FitTwist, ExactLine) {
  std::vector<PoincareSample> samples;
  for (double I : {1e-4, 3e-4, 1e-3, 2e-3, 5e-3}) samples.push_back({I, 0.3 - 4.7 * I, 6.0, true});
  samples.push_back({0.5, 100.0, 6.0, false});
  const TwistFit fit = fit_twist(samples);
  EXPECT_NEAR(fit.slope, -4.7, 1e-10);
  EXPECT_NEAR(fit.intercept, 0.3, 1e-12);
  EXPECT_LT(fit.residual, 1e-12);
  EXPECT_EQ(fit.used, 5u);
}

TEST(FitTwist, RejectsThinData) {
  std::vector<PoincareSample> three{{1e-4, 0, 6, true}, {1e-3, 0, 6, true}, {5e-3, 0, 6, true}};
  EXPECT_THROW(fit_twist(three), FitError);
  std::vector<PoincareSample> narrow{{1e-3, 0, 6, true}, {2e-3, 0, 6, true}, {3e-3, 0, 6, true}, {4e-3, 0, 6, true}};
  EXPECT_THROW(fit_twist(narrow), FitError);
}

TEST(FitTwist, MeasuredSlopeMatchesTheTwist) {
  const VehicleParams params = family(0.3);
  const SectionSpec s = spec_with(1e-2);
  const auto samples = poincare_map(s, params, IntegratorConfig{});
  const TwistFit fit = fit_twist(samples);
  const double predicted = twist_slope(params, 1.0);
  EXPECT_NEAR(predicted, -kPi / 0.21, 1e-12);
  EXPECT_NEAR(fit.slope, predicted, 0.05 * std::abs(predicted));

  double lo = 1e300;
  double hi = -1e300;
  for (const auto& x : samples) {
    lo = std::min(lo, x.I_measured);
    hi = std::max(hi, x.I_measured);
  }
  EXPECT_LT(fit.residual, 0.05 * std::abs(fit.slope) * (hi - lo));
}

TEST(Figure, ParabolaValues) {
  EXPECT_NEAR(parabola_reciprocal_twist(0.3, 1.0), -0.21 / kPi, 1e-16);
  EXPECT_NEAR(parabola_reciprocal_twist(0.5, 1.0), -0.25 / kPi, 1e-16);
  EXPECT_LT(parabola_reciprocal_twist(1e-9, 1.0), 0.0);
  EXPECT_GT(parabola_reciprocal_twist(1e-9, 1.0), -1e-9);
}

TEST(Figure, RowsFollowTheGrid) {
  const std::vector<double> grid{0.5, 0.3, 1.2};
  const auto rows = figure_experiment(grid, 1e-2, 1.0, FigureOptions{});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].I1, 0.5);
  EXPECT_EQ(rows[1].I1, 0.3);
  EXPECT_NEAR(rows[0].predicted, -0.25 / kPi, 1e-16);
  EXPECT_TRUE(rows[0].ok);
  EXPECT_TRUE(rows[1].ok);
  EXPECT_LT(rows[0].rel_err, 0.1);
  EXPECT_LT(rows[1].rel_err, 0.1);
  EXPECT_FALSE(rows[2].ok);
  EXPECT_FALSE(rows[2].error.empty());

  EXPECT_TRUE(figure_experiment(std::vector<double>{}, 1e-2, 1.0, FigureOptions{}).empty());
}
