// Numerical return map of the original (pi, p) system near the spinning
// relative equilibrium, and the twist it exhibits.
//
// The section is the azimuth of p about k returning to its initial value,
// crossed in the sense of the SO(2) drift. The angle psi is tracked
// continuously so the full rotation per return (near 2 pi on the
// I1 + I2 = I3 family) is resolved.

#pragma once

#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "uvstab/dynamics.hpp"
#include "uvstab/execution.hpp"
#include "uvstab/integrate.hpp"
#include "uvstab/normalform.hpp"

namespace uvstab {

struct SectionSpec {
  double alpha_e = 1.0;
  /// |p| of every initial condition.
  double a = 1e-2;
  /// Departure direction w = sin(theta) i + cos(theta) k.
  double theta = std::numbers::pi / 2;
  int n_returns = 32;
  /// Target actions.
  std::vector<double> I_grid;

  void validate() const;
};

/// a * {0.08, 0.15, 0.3, 0.55, 1}: comparable to a and spanning over a decade.
std::vector<double> default_action_grid(double a);

struct PoincareSample {
  double I_measured = 0.0;
  /// Mean unwrapped change of psi per return.
  double dpsi = 0.0;
  double T_measured = 0.0;
  bool valid = false;
};

struct ReturnRecord {
  double t = 0.0;
  double action = 0.0;
  /// Unwrapped angle, continuous from t = 0.
  double psi = 0.0;
};

struct PoincareOrbit {
  double I0 = 0.0;
  PoissonState initial;
  double psi0 = 0.0;
  std::vector<ReturnRecord> returns;
  bool valid = false;
  std::string reason;

  PoincareSample summary() const;
  /// Largest |I' - I| between consecutive section points (including t = 0).
  double max_action_jump() const;
};

/// Leading-order action-angle coordinates P = pi_x / sqrt(alpha),
/// Q = pi_y / sqrt(alpha) of the rigid chart.
ActionAngle measure_action_angle(const PoissonState& s, const NormalFormCoeffs& c);

/// Initial condition at action I0 on the energy level of the relative
/// equilibrium, with p = a w(theta) and pi.w unchanged from its equilibrium
/// value. The perturbation is along pi_y, so psi starts at pi/2.
PoissonState section_initial_state(const SectionSpec& spec, const VehicleParams& params,
                                   double I0);

PoincareOrbit trace_orbit(const SectionSpec& spec, const VehicleParams& params, double I0,
                          const IntegratorConfig& cfg);

/// One averaged sample per entry of spec.I_grid, in grid order.
std::vector<PoincareSample> poincare_map(const SectionSpec& spec, const VehicleParams& params,
                                         const IntegratorConfig& cfg,
                                         Execution execution = Execution::parallel);

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TwistFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// RMS deviation from the fitted line.
  double residual = 0.0;
  std::size_t used = 0;
};

/// Least-squares line dpsi = intercept + slope I over the valid samples.
/// Needs at least four of them with max I >= 10 min I.
TwistFit fit_twist(std::span<const PoincareSample> samples);

struct FigureOptions {
  IntegratorConfig integrator;
  int n_returns = 32;
  double theta = std::numbers::pi / 2;
  /// Actions as multiples of a.
  std::vector<double> action_fractions{0.08, 0.15, 0.3, 0.55, 1.0};
  Vec3 mass = Vec3(1.0, 2.0, 3.0);
};

struct FigureRow {
  double I1 = 0.0;
  double measured = 0.0;
  double predicted = 0.0;
  double rel_err = 0.0;
  bool ok = false;
  std::string error;
};

/// I / h(I) on the family I3 = 1, I2 = 1 - I1: -alpha_e I1 (1 - I1) / pi.
double parabola_reciprocal_twist(double I1, double alpha_e);

/// Measured reciprocal twist 1 / slope against the parabola, one row per
/// grid entry in input order. Failures are reported per row.
std::vector<FigureRow> figure_experiment(std::span<const double> I1_grid, double a,
                                         double alpha_e, const FigureOptions& options,
                                         Execution execution = Execution::parallel);

}  // namespace uvstab
