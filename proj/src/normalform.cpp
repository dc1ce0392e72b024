#include "uvstab/normalform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace uvstab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive_spin(double alpha_e) {
  if (alpha_e == 0.0) {
    throw NormalFormError(NormalFormError::Kind::zero_spin, "alpha_e must be nonzero");
  }
  if (!(alpha_e > 0.0)) {
    throw NormalFormError(NormalFormError::Kind::domain, "normal-form basis requires alpha_e > 0");
  }
}

double shifted_hamiltonian(const BlownUpState& s, const VehicleParams& params, double lambda) {
  return blown_hamiltonian(s, params).h0 - lambda * so2_momentum(s).value;
}

Eigen::Matrix4d express_derivatives(const CanonicalBasis& basis, const VehicleParams& params,
                                    double lambda, double step) {
  auto field = [&](const BlownUpState& s) { return shifted_field(s, params, lambda); };
  Eigen::Matrix4d A;
  for (int j = 0; j < 4; ++j) {
    const TangentPair d = constrained_derivative(field, basis.base, basis.vectors[j], step);
    A.col(j) = basis.coordinates(d);
  }
  return A;
}

}  // namespace

NormalFormCoeffs coefficients(const VehicleParams& params, double alpha_e) {
  if (alpha_e == 0.0) {
    throw NormalFormError(NormalFormError::Kind::zero_spin, "alpha_e must be nonzero");
  }
  const Vec3& I = params.inertia();
  const double a1 = 1.0 / I[0] - 1.0 / I[2];
  const double a2 = 1.0 / I[1] - 1.0 / I[2];
  const double product = a1 * a2;
  if (product < 0.0) {
    throw NormalFormError(NormalFormError::Kind::intermediate_axis,
                          "I3 is the intermediate axis; omega_e is imaginary");
  }
  if (!(product > 0.0)) {
    throw NormalFormError(NormalFormError::Kind::degenerate_axis,
                          "I3 coincides with another moment; omega_e vanishes");
  }
  // Positive branch when I3 is the long axis (a1, a2 > 0).
  const double branch = a1 > 0.0 ? 1.0 : -1.0;

  NormalFormCoeffs c;
  c.alpha_e = alpha_e;
  c.D = I[1] * (I[2] - I[0]) / (I[0] * (I[2] - I[1]));
  c.omega_e = branch * alpha_e * std::sqrt(product);
  c.kappa_e = 1.0 / I[2];
  c.upsilon_e = -(c.omega_e / (2.0 * alpha_e)) * (std::sqrt(c.D) + 1.0 / std::sqrt(c.D));
  c.c4 = -c.omega_e / (2.0 * alpha_e);
  c.xi_e = -alpha_e / I[2];
  c.mu_e = -alpha_e;
  return c;
}

double upsilon_from_inertia(const VehicleParams& params) {
  const Vec3& I = params.inertia();
  return 0.5 * (2.0 / I[2] - 1.0 / I[0] - 1.0 / I[1]);
}

TwistCondition twist_condition(const VehicleParams& params, double alpha_e) {
  const NormalFormCoeffs c = coefficients(params, alpha_e);
  const double rotation_part = c.upsilon_e * c.xi_e * c.xi_e;
  const double frequency_part = c.kappa_e * c.omega_e * c.omega_e;
  TwistCondition t;
  t.value = rotation_part - frequency_part;
  t.satisfied =
      std::abs(t.value) > 1e-10 * std::max(std::abs(rotation_part), std::abs(frequency_part));
  return t;
}

double twist_factored(const VehicleParams& params, double alpha_e) {
  const Vec3& I = params.inertia();
  return -(alpha_e * alpha_e / (I[2] * I[2])) * (1.0 / (I[0] * I[1])) *
         (I[2] - 0.5 * (I[0] + I[1]));
}

double twist_slope(const VehicleParams& params, double alpha_e) {
  const NormalFormCoeffs c = coefficients(params, alpha_e);
  const double value = twist_condition(params, alpha_e).value;
  return -(kTwoPi / (c.xi_e * c.xi_e * c.xi_e)) * value;
}

PoincarePrediction predicted_poincare(double action, double psi, double eps,
                                      const VehicleParams& params, double alpha_e) {
  const NormalFormCoeffs c = coefficients(params, alpha_e);
  const double eps2 = eps * eps;
  PoincarePrediction out;
  out.action = action;
  out.angle = psi - kTwoPi * c.omega_e / c.xi_e + eps2 * twist_slope(params, alpha_e) * action;
  out.return_time = -(kTwoPi / c.xi_e) *
                    (1.0 + (alpha_e * c.kappa_e + c.xi_e) * c.omega_e * action /
                               (alpha_e * c.xi_e * c.xi_e) * eps2);
  return out;
}

Eigen::Matrix<double, 6, 4> CanonicalBasis::matrix() const {
  Eigen::Matrix<double, 6, 4> B;
  for (int j = 0; j < 4; ++j) B.col(j) = vectors[j].stacked();
  return B;
}

Eigen::Vector4d CanonicalBasis::coordinates(const TangentPair& v) const {
  return matrix().colPivHouseholderQr().solve(v.stacked());
}

CanonicalBasis canonical_basis(double alpha_e, double theta, const VehicleParams& params) {
  require_positive_spin(alpha_e);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  if (!(theta > 0.0 && theta < std::numbers::pi) || std::abs(s) < 1e-8) {
    throw NormalFormError(NormalFormError::Kind::domain,
                          "canonical_basis requires theta in (0, pi); use equilibrium_basis");
  }
  const double D = coefficients(params, alpha_e).D;
  const double q = std::pow(D, 0.25);
  const double root = std::sqrt(alpha_e);
  const double al = alpha_e;

  CanonicalBasis b;
  b.base = blown_relative_equilibrium(alpha_e, theta);
  b.vectors[0] = (q / root) * TangentPair{Vec3(0, c, 0), Vec3(0, al * s * s, 0)};
  b.vectors[1] = (1.0 / (q * root)) * TangentPair{Vec3(c, 0, -s), Vec3(al * s * s, 0, al * s * c)};
  b.vectors[2] = s * TangentPair{Vec3(0, 1, 0), Vec3(0, -al * c, 0)};
  b.vectors[3] = (1.0 / (al * s)) * TangentPair{Vec3(-c * c, 0, c * s),
                                                Vec3(al * c * c * c, 0, -al * s * (1 + c * c))};
  return b;
}

CanonicalBasis equilibrium_basis(double alpha_e, const VehicleParams& params) {
  require_positive_spin(alpha_e);
  const double D = coefficients(params, alpha_e).D;
  const double q = std::pow(D, 0.25);
  const double root = std::sqrt(alpha_e);

  CanonicalBasis b;
  b.base = blown_relative_equilibrium(alpha_e, 0.0);
  b.vectors[0] = (q / root) * TangentPair{Vec3(0, 1, 0), Vec3::Zero()};
  b.vectors[1] = (1.0 / (q * root)) * TangentPair{Vec3(1, 0, 0), Vec3::Zero()};
  b.vectors[2] = (1.0 / root) * TangentPair{Vec3(0, 1, 0), Vec3(0, -alpha_e, 0)};
  b.vectors[3] = (1.0 / root) * TangentPair{Vec3(-1, 0, 0), Vec3(alpha_e, 0, 0)};
  return b;
}

Eigen::Matrix4d symplectic_matrix(const CanonicalBasis& basis) {
  Eigen::Matrix4d W;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      W(i, j) = symplectic_form(basis.base, basis.vectors[i], basis.vectors[j]);
  return W;
}

Eigen::RowVector4d momentum_differential(const CanonicalBasis& basis, double step) {
  auto momentum = [](const BlownUpState& s) { return so2_momentum(s).value; };
  Eigen::RowVector4d dJ;
  for (int j = 0; j < 4; ++j)
    dJ[j] = constrained_derivative(momentum, basis.base, basis.vectors[j], step, true);
  return dJ;
}

Eigen::Matrix4d linearization(double alpha_e, double theta, const VehicleParams& params,
                              double step) {
  const CanonicalBasis basis = canonical_basis(alpha_e, theta, params);
  const double xi = -alpha_e / params.inertia()[2];
  return express_derivatives(basis, params, xi, step);
}

Eigen::Matrix4d equilibrium_linearization(double alpha_e, const VehicleParams& params,
                                          double step) {
  const CanonicalBasis basis = equilibrium_basis(alpha_e, params);
  const double lambda = -alpha_e / params.inertia()[2];
  return express_derivatives(basis, params, lambda, step);
}

Eigen::Matrix4d expected_linearization(const NormalFormCoeffs& c, bool at_equilibrium) {
  Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
  A(0, 1) = c.omega_e;
  A(1, 0) = -c.omega_e;
  A(2, 3) = at_equilibrium ? 0.0 : c.kappa_e;
  return A;
}

QuarticFit null_space_quartic(double alpha_e, const VehicleParams& params) {
  const CanonicalBasis basis = equilibrium_basis(alpha_e, params);
  const double lambda = -alpha_e / params.inertia()[2];
  const double h_base = shifted_hamiltonian(basis.base, params, lambda);

  // (H(r) - H(0)) / r^4 = c4 + c6 r^2 + c8 r^4 along each direction.
  constexpr std::array<double, 5> radii{0.01, 0.015, 0.02, 0.025, 0.03};
  constexpr std::array<double, 3> directions{0.0, 0.7, 1.9};
  QuarticFit fit;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (double angle : directions) {
    Eigen::Matrix<double, radii.size(), 3> V;
    Eigen::Matrix<double, radii.size(), 1> rhs;
    for (std::size_t k = 0; k < radii.size(); ++k) {
      const double r = radii[k];
      const TangentPair d =
          r * std::cos(angle) * basis.vectors[2] + r * std::sin(angle) * basis.vectors[3];
      BlownUpState s = basis.base;
      s.w += d.dw;
      s.wdot += d.dwdot;
      s = project_to_constraints(s);
      const double r2 = r * r;
      V.row(k) << 1.0, r2, r2 * r2;
      rhs[k] = (shifted_hamiltonian(s, params, lambda) - h_base) / (r2 * r2);
    }
    const double c4 = V.colPivHouseholderQr().solve(rhs)[0];
    fit.coefficient += c4 / directions.size();
    lo = std::min(lo, c4);
    hi = std::max(hi, c4);
  }
  fit.spread = hi - lo;
  return fit;
}

Vec3 rigid_chart(double Q, double P, double alpha_e) {
  const double r2 = Q * Q + P * P;
  if (!(alpha_e > 0.0) || !(r2 < 4.0 * alpha_e)) {
    throw NormalFormError(NormalFormError::Kind::domain,
                          "rigid_chart requires alpha_e > 0 and Q^2 + P^2 < 4 alpha_e");
  }
  const double scale = std::sqrt(alpha_e - 0.25 * r2);
  return {scale * P, scale * Q, alpha_e - 0.5 * r2};
}

Eigen::Vector2d chart_from_action_angle(double action, double psi, double D) {
  const double amplitude = std::sqrt(2.0 * action);
  const double q = std::pow(D, 0.25);
  return {amplitude * q * std::sin(psi), amplitude / q * std::cos(psi)};
}

ActionAngle action_angle_from_chart(double Q, double P, double D) {
  const double q = std::pow(D, 0.25);
  return {0.5 * (std::sqrt(D) * P * P + Q * Q / std::sqrt(D)), std::atan2(Q / q, q * P)};
}

double averaged_rigid_energy(double action, const VehicleParams& params, double alpha_e,
                             int samples) {
  const double D = coefficients(params, alpha_e).D;
  double sum = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double psi = kTwoPi * k / samples;
    const Eigen::Vector2d qp = chart_from_action_angle(action, psi, D);
    PoissonState s;
    s.pi = rigid_chart(qp[0], qp[1], alpha_e);
    sum += hamiltonian(s, params);
  }
  return sum / samples;
}

double upsilon_by_averaging(double action, const VehicleParams& params, double alpha_e) {
  const NormalFormCoeffs c = coefficients(params, alpha_e);
  const double base = alpha_e * alpha_e / (2.0 * params.inertia()[2]);
  const double mean = averaged_rigid_energy(action, params, alpha_e);
  return (mean - base - c.omega_e * action) / (0.5 * action * action);
}

double symmetry_break_H10(double theta, double phi, const VehicleParams& params) {
  const Vec3& M = params.mass();
  const double s = std::sin(theta);
  const double c = std::cos(phi);
  return (M[1] - M[0]) / (2.0 * M[0] * M[1]) * s * s * c * c;
}

double symmetry_break_eq_H11(double q, double p, double x, double y, const VehicleParams& params,
                             double alpha_e) {
  require_positive_spin(alpha_e);
  const Vec3& M = params.mass();
  const double quarter = std::pow(coefficients(params, alpha_e).D, 0.25);
  const double first = p / quarter - y;
  const double second = quarter * q + x;
  return (M[2] - M[0]) * first * first / (alpha_e * M[0] * M[2]) +
         (M[2] - M[1]) * second * second / (alpha_e * M[1] * M[2]);
}

double equilibrium_normal_form(double action, double nu, const NormalFormCoeffs& c) {
  return c.omega_e * action + 0.5 * c.upsilon_e * action * action + c.xi_e * nu +
         0.5 * c.kappa_e * nu * nu - (c.omega_e / c.alpha_e) * action * nu;
}

double arnold_quantity(const NormalFormCoeffs& c) {
  return equilibrium_normal_form(c.xi_e, -c.omega_e, c);
}

}  // namespace uvstab
