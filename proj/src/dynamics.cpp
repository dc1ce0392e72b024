#include "uvstab/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace uvstab {

VehicleParams::VehicleParams(const Vec3& inertia, const Vec3& mass)
    : inertia_(inertia), mass_(mass) {
  for (int i = 0; i < 3; ++i) {
    if (!(std::isfinite(inertia[i]) && inertia[i] > 0.0)) {
      throw std::invalid_argument("inertia entries must be positive and finite");
    }
    if (!(std::isfinite(mass[i]) && mass[i] > 0.0)) {
      throw std::invalid_argument("added-mass entries must be positive and finite");
    }
  }
}

PoissonVector pack(const PoissonState& s) {
  PoissonVector y;
  y << s.pi, s.p;
  return y;
}

PoissonState unpack_poisson(const PoissonVector& y) {
  return {y.head<3>(), y.tail<3>()};
}

PoissonTangent vector_field(const PoissonState& s, const VehicleParams& params) {
  const Vec3 omega = params.angular_velocity(s.pi);
  const Vec3 v = params.linear_velocity(s.p);
  return {s.pi.cross(omega) + s.p.cross(v), s.p.cross(omega)};
}

double hamiltonian(const PoissonState& s, const VehicleParams& params) {
  return 0.5 * s.pi.dot(params.angular_velocity(s.pi)) +
         0.5 * s.p.dot(params.linear_velocity(s.p));
}

Casimirs casimirs(const PoissonState& s, double zero_p_tol) {
  Casimirs c;
  c.p_norm = s.p.norm();
  c.pi_dot_p = s.pi.dot(s.p);
  c.pi_norm = s.pi.norm();
  c.pi_norm_conserved = c.p_norm < zero_p_tol;
  return c;
}

EquilibriumFamily equilibrium(double alpha_e, const VehicleParams& params) {
  EquilibriumFamily e;
  e.alpha_e = alpha_e;
  e.state.pi = Vec3(0.0, 0.0, alpha_e);
  e.generator_omega = Vec3(0.0, 0.0, alpha_e / params.inertia()[2]);
  return e;
}

}  // namespace uvstab
