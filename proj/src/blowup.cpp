#include "uvstab/blowup.hpp"

#include <cmath>

namespace uvstab {

BlownVector pack(const BlownUpState& s) {
  BlownVector y;
  y << s.w, s.wdot, s.a, s.gamma;
  return y;
}

BlownUpState unpack_blown(const BlownVector& y) {
  return {y.segment<3>(0), y.segment<3>(3), y[6], y[7]};
}

bool satisfies_constraints(const BlownUpState& s, double tol) {
  return std::abs(s.w.norm() - 1.0) <= tol && std::abs(s.w.dot(s.wdot)) <= tol && s.a >= 0.0;
}

bool is_tangent(const BlownUpState& s, const TangentPair& d, double tol) {
  return std::abs(s.w.dot(d.dw)) <= tol && std::abs(d.dw.dot(s.wdot) + s.w.dot(d.dwdot)) <= tol;
}

BlownUpState project_to_constraints(BlownUpState s) {
  s.w.normalize();
  s.wdot -= s.w.dot(s.wdot) * s.w;
  return s;
}

void project_to_constraints(BlownVector& y) {
  Vec3 w = y.segment<3>(0).normalized();
  Vec3 wdot = y.segment<3>(3);
  wdot -= w.dot(wdot) * w;
  y.segment<3>(0) = w;
  y.segment<3>(3) = wdot;
}

PoissonState blow_down(const BlownUpState& s) {
  return {s.wdot + s.gamma * s.w, s.a * s.w};
}

BlownUpState blow_up(const PoissonState& s, double zero_p_tol) {
  const double a = s.p.norm();
  if (!(a > zero_p_tol)) {
    throw BlowUpError("blow_up: |p| is below tolerance; gamma must be chosen explicitly");
  }
  BlownUpState b;
  b.a = a;
  b.w = s.p / a;
  b.gamma = s.pi.dot(b.w);
  b.wdot = s.pi - b.gamma * b.w;
  return b;
}

PoissonTangent push_forward(const BlownUpState& s, const TangentPair& d) {
  return {d.dwdot + s.gamma * d.dw, s.a * d.dw};
}

TangentPair blown_vector_field(const BlownUpState& s, const VehicleParams& params) {
  const Vec3 omega = params.angular_velocity(s.wdot + s.gamma * s.w);
  return {s.w.cross(omega),
          s.wdot.cross(omega) + s.a * s.a * s.w.cross(params.linear_velocity(s.w))};
}

BlownHamiltonian blown_hamiltonian(const BlownUpState& s, const VehicleParams& params) {
  const Vec3 pi = s.wdot + s.gamma * s.w;
  BlownHamiltonian h;
  h.h0 = 0.5 * pi.dot(params.angular_velocity(pi));
  h.h1 = 0.5 * s.w.dot(params.linear_velocity(s.w));
  h.total = h.h0 + s.a * s.a * h.h1;
  return h;
}

double symplectic_form(const BlownUpState& s, const TangentPair& d1, const TangentPair& d2) {
  return -s.w.dot(d1.dw.cross(d2.dwdot) - d2.dw.cross(d1.dwdot)) -
         s.gamma * s.w.dot(d1.dw.cross(d2.dw));
}

So2Momentum so2_momentum(const BlownUpState& s) {
  const double r2 = s.gamma * s.gamma + s.wdot.squaredNorm();
  return {-std::sqrt(r2), r2 < 1e-24};
}

namespace {

Vec3 rotation_axis(const BlownUpState& s) {
  if (so2_momentum(s).degenerate) {
    throw BlowUpError("SO(2) action is undefined where gamma = 0 and wdot = 0");
  }
  return (s.wdot + s.gamma * s.w).normalized();
}

}  // namespace

BlownUpState so2_act(double theta, const BlownUpState& s) {
  const Eigen::AngleAxisd rotation(theta, rotation_axis(s));
  BlownUpState r = s;
  r.w = rotation * s.w;
  r.wdot = rotation * s.wdot;
  return r;
}

TangentPair so2_generator(const BlownUpState& s) {
  const Vec3 m = rotation_axis(s);
  return {m.cross(s.w), m.cross(s.wdot)};
}

TangentPair shifted_field(const BlownUpState& s, const VehicleParams& params, double lambda) {
  return blown_vector_field(s, params) - lambda * so2_generator(s);
}

BlownUpState blown_relative_equilibrium(double alpha_e, double theta) {
  BlownUpState s;
  s.w = Vec3(std::sin(theta), 0.0, std::cos(theta));
  s.gamma = alpha_e * std::cos(theta);
  s.wdot = alpha_e * Vec3::UnitZ() - s.gamma * s.w;
  s.a = 0.0;
  return s;
}

double reduced_leaf_form(const Vec3& pi, const Vec3& dpi1, const Vec3& dpi2, double tol) {
  const double r2 = pi.squaredNorm();
  if (!(std::sqrt(r2) > tol)) {
    throw BlowUpError("reduced_leaf_form: |pi| is below tolerance");
  }
  return -pi.dot(dpi1.cross(dpi2)) / r2;
}

LeafLift lift_leaf_tangents(const Vec3& pi, double gamma, const Vec3& dpi1, const Vec3& dpi2) {
  const double r = pi.norm();
  if (!(std::abs(gamma) < r)) {
    throw BlowUpError("lift_leaf_tangents: requires |gamma| < |pi|");
  }
  const Vec3 axis = pi / r;
  Vec3 reference = Vec3::UnitX();
  if (std::abs(axis.dot(reference)) > 0.9) reference = Vec3::UnitY();
  const Vec3 u = (reference - reference.dot(axis) * axis).normalized();

  LeafLift lift;
  lift.base.gamma = gamma;
  lift.base.a = 0.0;
  lift.base.w = (gamma / r) * axis + std::sqrt(1.0 - gamma * gamma / (r * r)) * u;
  lift.base.wdot = pi - gamma * lift.base.w;

  // mu^2 - gamma^2 with mu = -|pi| the momentum level.
  const Vec3& w = lift.base.w;
  const double denom = r * r - gamma * gamma;
  const Vec3 w_cross_pi = w.cross(pi);
  auto lift_one = [&](const Vec3& dpi) {
    const double along = w.dot(dpi);
    return TangentPair{-(along / denom) * (pi - gamma * w),
                       along * w + (w_cross_pi.dot(dpi) / denom) * w_cross_pi};
  };
  lift.d1 = lift_one(dpi1);
  lift.d2 = lift_one(dpi2);
  return lift;
}

}  // namespace uvstab
