#include <gtest/gtest.h>

#include <numbers>

#include <Eigen/Eigenvalues>

#include "test_support.hpp"
#include "uvstab/normalform.hpp"

using namespace uvstab;
using uvstab::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

VehicleParams with_inertia(double i1, double i2, double i3) {
  return VehicleParams(Vec3(i1, i2, i3), Vec3(1, 2, 3));
}

Eigen::Matrix4d standard_form() {
  Eigen::Matrix4d j;
  j << 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0;
  return j;
}

struct Case {
  VehicleParams params;
  double alpha;
};

std::vector<Case> basis_cases() {
  return {{with_inertia(1, 2, 3), 3.0}, {with_inertia(3, 2, 1), 1.0}, {with_inertia(0.5, 0.8, 2.0), 0.7}};
}

}  // namespace

TEST(Coefficients, WorkedExample) {
  const NormalFormCoeffs c = coefficients(with_inertia(1, 2, 3), 3.0);
  EXPECT_DOUBLE_EQ(c.D, 4.0);
  EXPECT_NEAR(c.omega_e, 1.0, 1e-15);
  EXPECT_NEAR(c.kappa_e, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(c.upsilon_e, -5.0 / 12.0, 1e-15);
  EXPECT_NEAR(c.xi_e, -1.0, 1e-15);
  EXPECT_NEAR(c.mu_e, -3.0, 1e-15);
  EXPECT_NEAR(c.c4, -1.0 / 6.0, 1e-15);
}

TEST(Coefficients, AxisErrors) {
  try {
    coefficients(with_inertia(1, 3, 2), 1.0);
    FAIL() << "expected an intermediate-axis error";
  } catch (const NormalFormError& e) {
    EXPECT_EQ(e.kind(), NormalFormError::Kind::intermediate_axis);
  }
  try {
    coefficients(with_inertia(1, 1, 1), 1.0);
    FAIL() << "expected a degenerate-axis error";
  } catch (const NormalFormError& e) {
    EXPECT_EQ(e.kind(), NormalFormError::Kind::degenerate_axis);
  }
  EXPECT_THROW(coefficients(with_inertia(1, 2, 3), 0.0), NormalFormError);
}

TEST(Coefficients, ShortAxisFrequencyIsNegative) {
  EXPECT_LT(coefficients(with_inertia(3, 2, 1), 1.0).omega_e, 0.0);
  EXPECT_GT(coefficients(with_inertia(1, 2, 3), 1.0).omega_e, 0.0);
}

TEST(Coefficients, IdentitiesOverRandomDraws) {
  Gen gen(41);
  for (int k = 0; k < 1000; ++k) {
    const VehicleParams p = gen.admissible();
    const double alpha = gen.uniform(0.1, 6.0);
    const NormalFormCoeffs c = coefficients(p, alpha);
    ASSERT_NEAR(c.upsilon_e, upsilon_from_inertia(p), 1e-12 * std::abs(upsilon_from_inertia(p)) + 1e-300);
    const double f = twist_factored(p, alpha);
    ASSERT_NEAR(twist_condition(p, alpha).value, f, 1e-12 * std::abs(f));
    ASSERT_NEAR(c.kappa_e, 1.0 / p.inertia()[2], 1e-15);
    const double z = gen.uniform(-0.05, 3.0);
    const double scaled = c.omega_e * (alpha + z) / alpha;
    ASSERT_NEAR(coefficients(p, alpha + z).omega_e, scaled, 1e-12 * std::abs(scaled));
  }
}

TEST(TwistCondition, WorkedExampleAndSides) {
  const TwistCondition t = twist_condition(with_inertia(1, 2, 3), 3.0);
  EXPECT_NEAR(t.value, -0.75, 1e-14);
  EXPECT_TRUE(t.satisfied);
  EXPECT_NEAR(twist_factored(with_inertia(1, 2, 3), 3.0), -0.75, 1e-15);
  EXPECT_TRUE(twist_condition(with_inertia(0.5, 1.1, 2.0), 1.3).satisfied);
  // I3 = (I1 + I2) / 2 lies between I1 and I2, so there is no relative
  // equilibrium to test; the factored form still vanishes exactly there.
  EXPECT_EQ(twist_factored(with_inertia(1, 3, 2), 1.0), 0.0);
  EXPECT_THROW(twist_condition(with_inertia(1, 3, 2), 1.0), NormalFormError);
}

TEST(TwistSlope, WorkedValues) {
  EXPECT_NEAR(twist_slope(with_inertia(1, 2, 3), 3.0), -1.5 * kPi, 1e-13);
  // On I1 + I2 = I3 = 1 the slope is -pi / (alpha I1 I2).
  EXPECT_NEAR(twist_slope(with_inertia(0.3, 0.7, 1.0), 1.0), -kPi / 0.21, 1e-12);
  EXPECT_NEAR(twist_slope(with_inertia(0.3, 0.7, 1.0), 2.0), -kPi / 0.42, 1e-12);
}

TEST(TwistSlope, SignFlipsBetweenLongAndShortAxis) {
  Gen gen(42);
  for (int k = 0; k < 200; ++k) {
    const double i1 = gen.uniform(0.5, 2.0);
    const double i2 = gen.uniform(0.5, 2.0);
    const double alpha = gen.uniform(0.5, 3.0);
    const double longer = twist_slope(with_inertia(i1, i2, std::max(i1, i2) * gen.uniform(1.05, 3.0)), alpha);
    const double shorter = twist_slope(with_inertia(i1, i2, std::min(i1, i2) * gen.uniform(0.2, 0.95)), alpha);
    ASSERT_LT(longer, 0.0);
    ASSERT_GT(shorter, 0.0);
  }
}

TEST(PredictedPoincare, IntegrableLimit) {
  const VehicleParams p = with_inertia(1, 2, 3);
  const PoincarePrediction r = predicted_poincare(0.02, 0.4, 0.0, p, 3.0);
  EXPECT_EQ(r.action, 0.02);
  EXPECT_NEAR(r.angle, 0.4 + 2 * kPi, 1e-14);
  EXPECT_NEAR(r.return_time, 2 * kPi, 1e-14);

  Gen gen(43);
  for (int k = 0; k < 100; ++k) {
    const VehicleParams q = gen.admissible();
    const double I = gen.uniform(0, 1);
    EXPECT_EQ(predicted_poincare(I, 0.1, 0.0, q, 1.2).action, I);
    const double base = predicted_poincare(0.0, 0.1, 0.0, q, 1.2).angle;
    EXPECT_NEAR(predicted_poincare(0.0, 0.1, gen.uniform(0, 0.3), q, 1.2).angle, base, 1e-14);
  }
}

TEST(CanonicalBasis, WorkedVector) {
  const CanonicalBasis b = canonical_basis(2.0, kPi / 2, with_inertia(1, 2, 3));
  EXPECT_LE(b.vectors[0].dw.norm(), 1e-15);
  EXPECT_LE((b.vectors[0].dwdot - Vec3(0, 2, 0)).norm(), 1e-15);
  EXPECT_NEAR(symplectic_form(b.base, b.vectors[0], b.vectors[1]), 1.0, 1e-14);
}

TEST(CanonicalBasis, PropertiesOnGrid) {
  for (const Case& k : basis_cases()) {
    for (double theta : {0.1, 0.5, kPi / 2, 2.5}) {
      const CanonicalBasis b = canonical_basis(k.alpha, theta, k.params);
      EXPECT_LE((symplectic_matrix(b) - standard_form()).cwiseAbs().maxCoeff(), 1e-12);
      const Eigen::RowVector4d dj = momentum_differential(b);
      EXPECT_LE((dj - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff(), 1e-10) << dj;
      EXPECT_LE((b.vectors[2].stacked() - so2_generator(b.base).stacked()).cwiseAbs().maxCoeff(), 1e-14);
      for (const TangentPair& v : b.vectors) EXPECT_TRUE(is_tangent(b.base, v));
      const NormalFormCoeffs c = coefficients(k.params, k.alpha);
      EXPECT_LE((linearization(k.alpha, theta, k.params) - expected_linearization(c)).cwiseAbs().maxCoeff(),
                1e-6);
    }
  }
  EXPECT_THROW(canonical_basis(1.0, 0.0, with_inertia(1, 2, 3)), NormalFormError);
}

TEST(Linearization, WorkedMatrixAndSpectrum) {
  const VehicleParams p = with_inertia(1, 2, 3);
  Eigen::Matrix4d want;
  want << 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1.0 / 3.0, 0, 0, 0, 0;
  const Eigen::Matrix4d got = linearization(3.0, kPi / 2, p);
  EXPECT_LE((got - want).cwiseAbs().maxCoeff(), 1e-6) << got;
  const Eigen::Vector4cd ev = Eigen::EigenSolver<Eigen::Matrix4d>(got).eigenvalues();
  int zeros = 0;
  int unit = 0;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(ev[i]) < 1e-4) ++zeros;
    if (std::abs(std::abs(ev[i].imag()) - 1.0) < 1e-6 && std::abs(ev[i].real()) < 1e-6) ++unit;
  }
  EXPECT_EQ(zeros, 2);
  EXPECT_EQ(unit, 2);
}

TEST(EquilibriumBasis, CanonicalWithVanishingKappaBlock) {
  for (const Case& k : basis_cases()) {
    const CanonicalBasis b = equilibrium_basis(k.alpha, k.params);
    EXPECT_LE((symplectic_matrix(b) - standard_form()).cwiseAbs().maxCoeff(), 1e-12);
    const NormalFormCoeffs c = coefficients(k.params, k.alpha);
    const Eigen::Matrix4d lin = equilibrium_linearization(k.alpha, k.params);
    EXPECT_LE((lin - expected_linearization(c, true)).cwiseAbs().maxCoeff(), 1e-6) << lin;

    const Eigen::Vector4cd ev = Eigen::EigenSolver<Eigen::Matrix4d>(lin).eigenvalues();
    std::vector<double> imag;
    for (int i = 0; i < 4; ++i) {
      EXPECT_LE(std::abs(ev[i].real()), 1e-6);
      imag.push_back(ev[i].imag());
    }
    std::sort(imag.begin(), imag.end());
    EXPECT_NEAR(imag[0], -std::abs(c.omega_e), 1e-6);
    EXPECT_NEAR(imag[1], 0.0, 1e-6);
    EXPECT_NEAR(imag[2], 0.0, 1e-6);
    EXPECT_NEAR(imag[3], std::abs(c.omega_e), 1e-6);

    const QuarticFit q = null_space_quartic(k.alpha, k.params);
    EXPECT_NEAR(q.coefficient, 1.0 / (8.0 * k.params.inertia()[2]), 1e-6);
    EXPECT_LT(q.spread, 1e-6);
  }
}

TEST(RigidChart, CenterAndSphere) {
  const Vec3 center = rigid_chart(0.0, 0.0, 1.7);
  EXPECT_EQ(center, Vec3(0, 0, 1.7));
  for (double Q = -1.0; Q <= 1.0; Q += 0.25) {
    for (double P = -1.0; P <= 1.0; P += 0.25) {
      EXPECT_NEAR(rigid_chart(Q, P, 2.0).norm(), 2.0, 1e-14) << Q << " " << P;
    }
  }
  EXPECT_THROW(rigid_chart(3.0, 3.0, 1.0), NormalFormError);
}

TEST(ActionAngle, ChartRoundTrip) {
  Gen gen(44);
  for (int k = 0; k < 500; ++k) {
    const double D = gen.uniform(0.1, 10.0);
    const double I = gen.uniform(1e-6, 1.0);
    const double psi = gen.uniform(-kPi, kPi);
    const Eigen::Vector2d qp = chart_from_action_angle(I, psi, D);
    const ActionAngle back = action_angle_from_chart(qp[0], qp[1], D);
    ASSERT_NEAR(back.action, I, 1e-14 * std::max(1.0, I));
    ASSERT_NEAR(std::remainder(back.angle - psi, 2 * kPi), 0.0, 1e-12);
  }
}

TEST(Averaging, RecoversUpsilon) {
  for (const Case& k : basis_cases()) {
    const double u = coefficients(k.params, k.alpha).upsilon_e;
    EXPECT_NEAR(upsilon_by_averaging(1e-3, k.params, k.alpha), u, 1e-6 * std::abs(u));
  }
}

TEST(SymmetryBreaking, LeadingTerm) {
  EXPECT_NEAR(symmetry_break_H10(kPi / 2, 0.0, VehicleParams(Vec3(1, 2, 3), Vec3(1, 2, 5))), 0.25, 1e-15);
  EXPECT_NEAR(symmetry_break_H10(kPi / 2, kPi / 2, VehicleParams(Vec3(1, 2, 3), Vec3(1, 2, 5))), 0.0, 1e-15);
  Gen gen(45);
  for (int k = 0; k < 50; ++k) {
    EXPECT_EQ(symmetry_break_H10(gen.uniform(0, kPi), gen.uniform(0, 2 * kPi),
                                 VehicleParams(Vec3(1, 2, 3), Vec3(1.5, 1.5, 4))),
              0.0);
  }
}

TEST(SymmetryBreaking, EquilibriumQuadratic) {
  const VehicleParams p(Vec3(1, 2, 3), Vec3(1, 2, 3));
  EXPECT_NEAR(symmetry_break_eq_H11(1, 0, 0, 0, p, 1.0), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(symmetry_break_eq_H11(0, 0, 0, 0, p, 1.0), 0.0);
  EXPECT_EQ(symmetry_break_eq_H11(0.3, -0.2, 0.5, 0.1, VehicleParams(Vec3(1, 2, 3), Vec3(2, 2, 2)), 1.0), 0.0);
}

TEST(ArnoldQuantity, VanishesWithTheTwist) {
  Gen gen(46);
  for (int k = 0; k < 300; ++k) {
    const VehicleParams p = gen.admissible();
    const double alpha = gen.uniform(0.2, 4.0);
    const NormalFormCoeffs c = coefficients(p, alpha);
    ASSERT_NEAR(arnold_quantity(c), 0.5 * twist_condition(p, alpha).value,
                1e-12 * std::max(1.0, std::abs(twist_condition(p, alpha).value)));
  }
}
