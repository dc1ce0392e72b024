// Blown-up phase space TS^2 x R_{>=0} x R of se(3)*.
//
// A point (w, wdot, a, gamma) blows down to p = a w, pi = wdot + gamma w.
// The generic leaves |p| = a, pi.p = a gamma all map to the same TS^2, and
// the nongeneric stratum p = 0 is recovered smoothly at a = 0.

#pragma once

#include <stdexcept>

#include "uvstab/dynamics.hpp"

namespace uvstab {

using BlownVector = Eigen::Matrix<double, 8, 1>;

struct BlownUpState {
  Vec3 w = Vec3::UnitZ();
  Vec3 wdot = Vec3::Zero();
  double a = 0.0;
  double gamma = 0.0;
};

/// Tangent vector (dw, dwdot) to TS^2. Arithmetic is componentwise.
struct TangentPair {
  Vec3 dw = Vec3::Zero();
  Vec3 dwdot = Vec3::Zero();

  TangentPair& operator+=(const TangentPair& o) {
    dw += o.dw;
    dwdot += o.dwdot;
    return *this;
  }
  TangentPair& operator-=(const TangentPair& o) {
    dw -= o.dw;
    dwdot -= o.dwdot;
    return *this;
  }
  TangentPair& operator*=(double s) {
    dw *= s;
    dwdot *= s;
    return *this;
  }
  friend TangentPair operator+(TangentPair l, const TangentPair& r) { return l += r; }
  friend TangentPair operator-(TangentPair l, const TangentPair& r) { return l -= r; }
  friend TangentPair operator*(double s, TangentPair v) { return v *= s; }
  friend TangentPair operator*(TangentPair v, double s) { return v *= s; }

  Eigen::Matrix<double, 6, 1> stacked() const {
    Eigen::Matrix<double, 6, 1> v;
    v << dw, dwdot;
    return v;
  }
  static TangentPair from_stacked(const Eigen::Matrix<double, 6, 1>& v) {
    return {v.head<3>(), v.tail<3>()};
  }
};

class BlowUpError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

BlownVector pack(const BlownUpState& s);
BlownUpState unpack_blown(const BlownVector& y);

/// | |w| - 1 | <= tol, |w.wdot| <= tol and a >= 0.
bool satisfies_constraints(const BlownUpState& s, double tol = 1e-12);
/// w.dw = 0 and dw.wdot + w.dwdot = 0 to tol.
bool is_tangent(const BlownUpState& s, const TangentPair& d, double tol = 1e-12);

/// Renormalize w and remove the w component of wdot.
BlownUpState project_to_constraints(BlownUpState s);
void project_to_constraints(BlownVector& y);

PoissonState blow_down(const BlownUpState& s);

/// Inverse of blow_down on the generic leaves. Throws BlowUpError when
/// |p| <= zero_p_tol since gamma is not determined there.
BlownUpState blow_up(const PoissonState& s, double zero_p_tol = 1e-10);

/// Differential of blow_down at s, with a and gamma held fixed.
PoissonTangent push_forward(const BlownUpState& s, const TangentPair& d);

/// dw/dt = w x I^-1(wdot + gamma w),
/// dwdot/dt = wdot x I^-1(wdot + gamma w) + a^2 w x M^-1 w.
TangentPair blown_vector_field(const BlownUpState& s, const VehicleParams& params);

struct BlownHamiltonian {
  double h0 = 0.0;
  double h1 = 0.0;
  double total = 0.0;
};

/// H0 = 1/2 (wdot + gamma w).I^-1(wdot + gamma w), H1 = 1/2 w.M^-1 w,
/// total = H0 + a^2 H1.
BlownHamiltonian blown_hamiltonian(const BlownUpState& s, const VehicleParams& params);

/// -w.(dw1 x dwdot2 - dw2 x dwdot1) - gamma w.(dw1 x dw2)
double symplectic_form(const BlownUpState& s, const TangentPair& d1, const TangentPair& d2);

struct So2Momentum {
  double value = 0.0;
  bool degenerate = false;
};

/// J = -sqrt(gamma^2 + |wdot|^2). Degenerate where the SO(2) action is
/// undefined (gamma and wdot both zero).
So2Momentum so2_momentum(const BlownUpState& s);

/// Right-handed rotation of (w, wdot) by theta about m = pi / |pi|.
/// Throws BlowUpError at the degenerate point.
BlownUpState so2_act(double theta, const BlownUpState& s);

/// Infinitesimal generator (m x w, m x wdot) of so2_act; this is also the
/// Hamiltonian vector field of J.
TangentPair so2_generator(const BlownUpState& s);

/// X_{H0} - lambda X_J, the field whose zeros at a = 0 are relative
/// equilibria with generator lambda.
TangentPair shifted_field(const BlownUpState& s, const VehicleParams& params, double lambda);

/// Relative equilibrium over pi = alpha_e k with w = sin(theta) i + cos(theta) k.
BlownUpState blown_relative_equilibrium(double alpha_e, double theta);

/// Symplectic form -pi.(dpi1 x dpi2)/|pi|^2 of the nongeneric leaf through pi.
/// Throws BlowUpError when |pi| <= tol.
double reduced_leaf_form(const Vec3& pi, const Vec3& dpi1, const Vec3& dpi2, double tol = 1e-12);

/// A point of J^-1(-|pi|) over pi with the given gamma, and lifts of two
/// leaf tangents dpi1, dpi2 to tangents of TS^2 with dwdot.wdot = 0.
struct LeafLift {
  BlownUpState base;
  TangentPair d1;
  TangentPair d2;
};

/// Requires |gamma| < |pi|. w is taken in the plane of pi and the first of
/// i, j that is not nearly parallel to pi.
LeafLift lift_leaf_tangents(const Vec3& pi, double gamma, const Vec3& dpi1, const Vec3& dpi2);

/// Centered difference of f along d at s, with both evaluation points
/// projected back onto the constraints. f maps BlownUpState to double or
/// TangentPair. With richardson the h and h/2 differences are combined.
template <class F>
auto constrained_derivative(F&& f, const BlownUpState& s, const TangentPair& d, double h,
                            bool richardson = false) {
  auto central = [&](double step) {
    BlownUpState plus = s;
    plus.w += step * d.dw;
    plus.wdot += step * d.dwdot;
    BlownUpState minus = s;
    minus.w -= step * d.dw;
    minus.wdot -= step * d.dwdot;
    return (f(project_to_constraints(plus)) - f(project_to_constraints(minus))) * (0.5 / step);
  };
  if (!richardson) return central(h);
  const auto coarse = central(h);
  const auto fine = central(0.5 * h);
  return (fine * 4.0 - coarse) * (1.0 / 3.0);
}

}  // namespace uvstab
