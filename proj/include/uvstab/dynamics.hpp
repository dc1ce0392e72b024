// Lie-Poisson dynamics of a neutrally buoyant ellipsoidal vehicle on se(3)*.
//
// State (pi, p) is the angular and linear impulse in body coordinates. The
// inertia I and added mass M are diagonal in the principal frame.

#pragma once

#include <Eigen/Dense>

namespace uvstab {

using Vec3 = Eigen::Vector3d;
using PoissonVector = Eigen::Matrix<double, 6, 1>;

/// Diagonal inertia and added-mass entries. All six must be positive.
class VehicleParams {
 public:
  VehicleParams(const Vec3& inertia, const Vec3& mass);

  const Vec3& inertia() const { return inertia_; }
  const Vec3& mass() const { return mass_; }

  /// Omega = I^-1 pi.
  Vec3 angular_velocity(const Vec3& pi) const { return pi.cwiseQuotient(inertia_); }
  /// v = M^-1 p.
  Vec3 linear_velocity(const Vec3& p) const { return p.cwiseQuotient(mass_); }

  bool operator==(const VehicleParams&) const = default;

 private:
  Vec3 inertia_;
  Vec3 mass_;
};

struct PoissonState {
  Vec3 pi = Vec3::Zero();
  Vec3 p = Vec3::Zero();
};

struct PoissonTangent {
  Vec3 dpi = Vec3::Zero();
  Vec3 dp = Vec3::Zero();
};

PoissonVector pack(const PoissonState& s);
PoissonState unpack_poisson(const PoissonVector& y);

/// dpi/dt = pi x Omega + p x v,  dp/dt = p x Omega.
PoissonTangent vector_field(const PoissonState& s, const VehicleParams& params);

/// 1/2 pi.I^-1 pi + 1/2 p.M^-1 p
double hamiltonian(const PoissonState& s, const VehicleParams& params);

/// The Casimirs |p| and pi.p, plus the subcasimir |pi|. The latter is only
/// a conserved quantity on the invariant set p = 0, which the flag records.
struct Casimirs {
  double p_norm = 0.0;
  double pi_dot_p = 0.0;
  double pi_norm = 0.0;
  bool pi_norm_conserved = false;
};

Casimirs casimirs(const PoissonState& s, double zero_p_tol = 1e-12);

/// Steady spin alpha_e about the body k axis with p = 0.
struct EquilibriumFamily {
  double alpha_e = 0.0;
  PoissonState state;
  Vec3 generator_omega = Vec3::Zero();
  Vec3 generator_v = Vec3::Zero();
};

EquilibriumFamily equilibrium(double alpha_e, const VehicleParams& params);

}  // namespace uvstab
