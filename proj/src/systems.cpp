#include "uvstab/systems.hpp"

#include <algorithm>
#include <random>

namespace uvstab {

Trajectory<6> simulate_original(const VehicleParams& params, const PoissonState& s0,
                                double t_final, const IntegratorConfig& cfg) {
  auto field = [&params](double, const PoissonVector& y) {
    const PoissonTangent d = vector_field(unpack_poisson(y), params);
    PoissonVector out;
    out << d.dpi, d.dp;
    return out;
  };
  return integrate<6>(field, pack(s0), 0.0, t_final, cfg);
}

Trajectory<8> simulate_blown(const VehicleParams& params, const BlownUpState& s0,
                             double t_final, const IntegratorConfig& cfg) {
  auto field = [&params](double, const BlownVector& y) {
    const TangentPair d = blown_vector_field(unpack_blown(y), params);
    BlownVector out;
    out << d.dw, d.dwdot, 0.0, 0.0;
    return out;
  };
  auto project = [](BlownVector& y) { project_to_constraints(y); };
  return integrate<8>(field, pack(project_to_constraints(s0)), 0.0, t_final, cfg, project);
}

ToleranceResponse tolerance_response(const VehicleParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  IntegratorConfig reference_cfg;
  reference_cfg.rel_tol = 1e-14;
  reference_cfg.abs_tol = 1e-16;
  ToleranceResponse out;
  for (int k = 0; k < 8; ++k) {
    const PoissonState s0{Vec3(normal(rng), normal(rng), normal(rng)), Vec3::Zero()};
    const PoissonVector reference = simulate_original(params, s0, 100.0, reference_cfg).states().back();
    for (double rel_tol = 1e-6; rel_tol >= 1e-10 * 0.99; rel_tol /= 10.0) {
      IntegratorConfig coarse;
      coarse.rel_tol = rel_tol;
      coarse.abs_tol = rel_tol * 1e-2;
      IntegratorConfig fine = coarse;
      fine.rel_tol /= 2.0;
      fine.abs_tol /= 2.0;
      const double e1 = (simulate_original(params, s0, 100.0, coarse).states().back() - reference).norm();
      const double e2 = (simulate_original(params, s0, 100.0, fine).states().back() - reference).norm();
      out.ratios.push_back(e1 / e2);
    }
  }
  std::sort(out.ratios.begin(), out.ratios.end());
  const std::size_t n = out.ratios.size();
  out.median = 0.5 * (out.ratios[(n - 1) / 2] + out.ratios[n / 2]);
  return out;
}

}  // namespace uvstab
