// Closed-form normal-form data at the blown-up relative equilibria and at the
// two equilibria w = +-k, and the twist map they predict.
//
// Throughout, alpha_e > 0 is the spin and I3 must not be the intermediate
// moment of inertia.

#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "uvstab/blowup.hpp"
#include "uvstab/dynamics.hpp"

namespace uvstab {

class NormalFormError : public std::runtime_error {
 public:
  enum class Kind { intermediate_axis, degenerate_axis, zero_spin, domain };

  NormalFormError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct NormalFormCoeffs {
  double alpha_e = 0.0;
  double D = 0.0;
  /// Signed linear frequency; positive when I3 is the largest moment.
  double omega_e = 0.0;
  double kappa_e = 0.0;
  double upsilon_e = 0.0;
  double c4 = 0.0;
  /// SO(2) generator -alpha_e / I3.
  double xi_e = 0.0;
  /// SO(2) momentum -alpha_e.
  double mu_e = 0.0;
};

NormalFormCoeffs coefficients(const VehicleParams& params, double alpha_e);

/// 1/2 (2/I3 - 1/I1 - 1/I2), the inertia-only form of upsilon_e.
double upsilon_from_inertia(const VehicleParams& params);

struct TwistCondition {
  double value = 0.0;
  bool satisfied = false;
};

/// upsilon_e xi_e^2 - kappa_e omega_e^2, nonzero for a twist map.
TwistCondition twist_condition(const VehicleParams& params, double alpha_e);

/// -(alpha_e^2 / I3^2) (1 / (I1 I2)) (I3 - (I1 + I2) / 2)
double twist_factored(const VehicleParams& params, double alpha_e);

/// dh/dI = -(2 pi / xi_e^3)(upsilon_e xi_e^2 - kappa_e omega_e^2).
double twist_slope(const VehicleParams& params, double alpha_e);

struct PoincarePrediction {
  double action = 0.0;
  double angle = 0.0;
  double return_time = 0.0;
};

/// Truncated return map (I, psi) -> (I', psi') and return time. I is the
/// rescaled action, so eps = 1 gives the map in unscaled variables.
PoincarePrediction predicted_poincare(double action, double psi, double eps,
                                      const VehicleParams& params, double alpha_e);

/// Four tangent vectors at a point of the blown-up space, in (w, wdot) order.
struct CanonicalBasis {
  BlownUpState base;
  std::array<TangentPair, 4> vectors;

  Eigen::Matrix<double, 6, 4> matrix() const;
  /// Least-squares coordinates of a tangent vector in this basis.
  Eigen::Vector4d coordinates(const TangentPair& v) const;
};

/// Basis v1..v4 at the relative equilibrium with angle theta in (0, pi).
CanonicalBasis canonical_basis(double alpha_e, double theta, const VehicleParams& params);
/// Basis v_{1,0}..v_{4,0} at the equilibrium w = k.
CanonicalBasis equilibrium_basis(double alpha_e, const VehicleParams& params);

/// Matrix of symplectic_form in the basis.
Eigen::Matrix4d symplectic_matrix(const CanonicalBasis& basis);

/// dJ applied to each basis vector, by Richardson-extrapolated centered
/// differences of so2_momentum with the given step.
Eigen::RowVector4d momentum_differential(const CanonicalBasis& basis, double step = 1e-4);

/// Linearization of X_{H0 - xi_e J} at the relative equilibrium, expressed
/// in canonical_basis, by centered differences of the projected field.
Eigen::Matrix4d linearization(double alpha_e, double theta, const VehicleParams& params,
                              double step = 1e-5);

/// Linearization of X_{H0 - lambda J} at the equilibrium w = k with
/// lambda = -alpha_e / I3, in equilibrium_basis.
Eigen::Matrix4d equilibrium_linearization(double alpha_e, const VehicleParams& params,
                                          double step = 1e-5);

/// Block matrix [[0, w, 0, 0], [-w, 0, 0, 0], [0, 0, 0, k], [0, 0, 0, 0]] with
/// w = omega_e and k = kappa_e (k = 0 for the equilibrium).
Eigen::Matrix4d expected_linearization(const NormalFormCoeffs& c, bool at_equilibrium = false);

/// Quartic coefficient of H0 - lambda J restricted to the null directions
/// x v_{3,0} + y v_{4,0} at the equilibrium, fitted over small radii.
struct QuarticFit {
  double coefficient = 0.0;
  /// Largest deviation between per-direction fits.
  double spread = 0.0;
};

QuarticFit null_space_quartic(double alpha_e, const VehicleParams& params);

/// Symplectic chart (Q, P) -> pi on the sphere |pi| = alpha_e.
Vec3 rigid_chart(double Q, double P, double alpha_e);

struct ActionAngle {
  double action = 0.0;
  double angle = 0.0;
};

/// Q = sqrt(2I) D^(1/4) sin(psi), P = sqrt(2I) D^(-1/4) cos(psi).
Eigen::Vector2d chart_from_action_angle(double action, double psi, double D);
ActionAngle action_angle_from_chart(double Q, double P, double D);

/// psi-average of 1/2 pi.I^-1 pi at fixed action in the rigid chart.
double averaged_rigid_energy(double action, const VehicleParams& params, double alpha_e,
                             int samples = 64);

/// Recovers upsilon_e from (<H> - alpha_e^2/(2 I3) - omega_e I) / (I^2 / 2).
double upsilon_by_averaging(double action, const VehicleParams& params, double alpha_e);

/// Leading symmetry-breaking term ((M2 - M1)/(2 M1 M2)) sin^2(theta) cos^2(phi).
double symmetry_break_H10(double theta, double phi, const VehicleParams& params);

/// Quadratic symmetry-breaking term at the equilibrium w = k.
double symmetry_break_eq_H11(double q, double p, double x, double y, const VehicleParams& params,
                             double alpha_e);

/// omega I + upsilon I^2/2 + xi nu + kappa nu^2/2 - (omega/alpha) I nu.
double equilibrium_normal_form(double action, double nu, const NormalFormCoeffs& c);

/// The normal form above at I = xi_e, nu = -omega_e.
double arnold_quantity(const NormalFormCoeffs& c);

}  // namespace uvstab
