// Integration of the original and blown-up systems with the adaptive
// integrator, and the conserved quantities sampled along the result.

#pragma once

#include <cstdint>
#include <vector>

#include "uvstab/blowup.hpp"
#include "uvstab/dynamics.hpp"
#include "uvstab/integrate.hpp"

namespace uvstab {

Trajectory<6> simulate_original(const VehicleParams& params, const PoissonState& s0,
                                double t_final, const IntegratorConfig& cfg);

/// Renormalizes w and re-projects wdot after every accepted step when
/// cfg.constraint_projection is set.
Trajectory<8> simulate_blown(const VehicleParams& params, const BlownUpState& s0,
                             double t_final, const IntegratorConfig& cfg);

struct ToleranceResponse {
  /// Error ratio for each (initial condition, rel_tol) pair, sorted.
  std::vector<double> ratios;
  double median = 0.0;
};

/// Final-state error ratio when rel_tol (and abs_tol = rel_tol / 100) is
/// halved, on free rigid-body motion (p = 0) over t in [0, 100] against a
/// rel_tol = 1e-14 reference. Eight seeded initial conditions, rel_tol in
/// {1e-6, ..., 1e-10}.
ToleranceResponse tolerance_response(const VehicleParams& params, std::uint64_t seed = 7);

/// Largest |q(t) - q(0)| / max(|q(0)|, floor) over the stored states.
template <int N, class Quantity>
double max_relative_drift(const Trajectory<N>& traj, Quantity&& q, double floor = 1e-300) {
  const double q0 = q(traj.states().front());
  const double scale = std::max(std::abs(q0), floor);
  double worst = 0.0;
  for (const auto& y : traj.states()) worst = std::max(worst, std::abs(q(y) - q0) / scale);
  return worst;
}

}  // namespace uvstab
