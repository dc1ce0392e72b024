#include "uvstab/poincare.hpp"

#include "uvstab/systems.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>

namespace uvstab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double x) { return std::remainder(x, kTwoPi); }

// Runs body(i) for i in [0, n), collecting exception messages per index so a
// failing task never escapes an OpenMP region.
template <class Body>
std::vector<std::string> run_tasks(std::size_t n, Execution execution, Body&& body) {
  std::vector<std::string> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      body(i);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      if (errors[i].empty()) errors[i] = "unknown failure";
    }
  };
  if (execution == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(scan_threads())
    for (long i = 0; i < count; ++i) guarded(static_cast<std::size_t>(i));
  }
  return errors;
}

}  // namespace

void SectionSpec::validate() const {
  if (!(alpha_e > 0.0)) throw std::invalid_argument("section: alpha_e must be positive");
  if (!(a > 0.0)) throw std::invalid_argument("section: a must be positive");
  if (!(theta > 0.0 && theta < kPi)) throw std::invalid_argument("section: theta must lie in (0, pi)");
  if (n_returns < 1) throw std::invalid_argument("section: n_returns must be at least 1");
  for (double I : I_grid) {
    if (!(I >= 0.0 && I < 0.1 * alpha_e)) {
      throw std::invalid_argument("section: I_grid values must lie in [0, 0.1 alpha_e)");
    }
  }
}

std::vector<double> default_action_grid(double a) {
  return {0.08 * a, 0.15 * a, 0.3 * a, 0.55 * a, a};
}

PoincareSample PoincareOrbit::summary() const {
  PoincareSample s;
  s.valid = valid && !returns.empty();
  if (returns.empty()) return s;
  double sum = 0.0;
  for (const auto& r : returns) sum += r.action;
  const double n = static_cast<double>(returns.size());
  s.I_measured = sum / n;
  s.dpsi = (returns.back().psi - psi0) / n;
  s.T_measured = returns.back().t / n;
  return s;
}

double PoincareOrbit::max_action_jump() const {
  double jump = 0.0;
  double previous = I0;
  for (const auto& r : returns) {
    jump = std::max(jump, std::abs(r.action - previous));
    previous = r.action;
  }
  return jump;
}

ActionAngle measure_action_angle(const PoissonState& s, const NormalFormCoeffs& c) {
  const double root = std::sqrt(c.alpha_e);
  return action_angle_from_chart(s.pi[1] / root, s.pi[0] / root, c.D);
}

PoissonState section_initial_state(const SectionSpec& spec, const VehicleParams& params,
                                   double I0) {
  spec.validate();
  const NormalFormCoeffs c = coefficients(params, spec.alpha_e);
  const Vec3& I = params.inertia();
  const double alpha = spec.alpha_e;
  const double st = std::sin(spec.theta);
  const double ct = std::cos(spec.theta);

  // Action I0 at psi = pi/2 with P = 0.
  const double pi_y = std::sqrt(2.0 * alpha * std::sqrt(c.D) * I0);

  // Move along (pi_x, pi_z) = (0, alpha) + t (cos theta, -sin theta), which
  // keeps pi.w fixed, until the energy returns to alpha^2 / (2 I3):
  //   A t^2 - B t + C = 0, taking the root nearest zero.
  const double A = ct * ct / I[0] + st * st / I[2];
  const double B = 2.0 * alpha * st / I[2];
  const double C = pi_y * pi_y / I[1];
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) {
    throw std::domain_error("section_initial_state: no point on the equilibrium energy level");
  }
  const double t = 2.0 * C / (B + std::sqrt(disc));

  PoissonState s;
  s.pi = Vec3(t * ct, pi_y, alpha - t * st);
  s.p = spec.a * Vec3(st, 0.0, ct);
  return s;
}

PoincareOrbit trace_orbit(const SectionSpec& spec, const VehicleParams& params, double I0,
                          const IntegratorConfig& cfg) {
  const NormalFormCoeffs c = coefficients(params, spec.alpha_e);
  PoincareOrbit orbit;
  orbit.I0 = I0;
  orbit.initial = section_initial_state(spec, params, I0);

  const double period = -kTwoPi / c.xi_e;
  const double t_final = (spec.n_returns + 0.5) * std::abs(period);
  const Trajectory<6> traj = simulate_original(params, orbit.initial, t_final, cfg);

  const double phi0 = std::atan2(orbit.initial.p[1], orbit.initial.p[0]);
  const double cos0 = std::cos(phi0);
  const double sin0 = std::sin(phi0);
  auto section = [cos0, sin0](const PoissonVector& y) { return y[4] * cos0 - y[3] * sin0; };
  const int direction = c.xi_e < 0.0 ? -1 : 1;
  const auto crossings = find_crossings(traj, section, direction);

  const Vec3 center(0.0, 0.0, spec.alpha_e);
  orbit.valid = true;
  for (const auto& y : traj.states()) {
    if ((y.head<3>() - center).norm() > 0.5 * spec.alpha_e) {
      orbit.valid = false;
      orbit.reason = "trajectory left the neighborhood |pi - alpha_e k| <= alpha_e / 2";
      break;
    }
  }
  if (crossings.size() < static_cast<std::size_t>(spec.n_returns)) {
    orbit.valid = false;
    orbit.reason = "fewer section returns than requested";
  }

  // Unwrap psi along the stored steps, refining any interval where the raw
  // angle moves by more than a quarter turn.
  auto raw_angle = [&](const PoissonVector& y) {
    return measure_action_angle(unpack_poisson(y), c).angle;
  };
  double t_prev = 0.0;
  double raw_prev = raw_angle(traj.states().front());
  double psi = raw_prev;
  orbit.psi0 = psi;
  auto advance_to = [&](double t_next) {
    auto step = [&](auto&& self, double ta, double raw_a, double tb) -> double {
      const double raw_b = raw_angle(traj(tb));
      const double delta = wrap_angle(raw_b - raw_a);
      if (std::abs(delta) > 0.5 * kPi && tb - ta > 1e-9) {
        const double tm = 0.5 * (ta + tb);
        const double raw_m = raw_angle(traj(tm));
        const double first = self(self, ta, raw_a, tm);
        return first + self(self, tm, raw_m, tb);
      }
      return delta;
    };
    psi += step(step, t_prev, raw_prev, t_next);
    t_prev = t_next;
    raw_prev = raw_angle(traj(t_next));
  };

  std::size_t next = 0;
  const std::size_t wanted = std::min(crossings.size(), static_cast<std::size_t>(spec.n_returns));
  const auto& times = traj.times();
  for (std::size_t i = 1; i < times.size() && next < wanted; ++i) {
    while (next < wanted && crossings[next].t <= times[i]) {
      advance_to(crossings[next].t);
      const ActionAngle aa = measure_action_angle(unpack_poisson(crossings[next].state), c);
      orbit.returns.push_back({crossings[next].t, aa.action, psi});
      ++next;
    }
    advance_to(times[i]);
  }
  return orbit;
}

std::vector<PoincareSample> poincare_map(const SectionSpec& spec, const VehicleParams& params,
                                         const IntegratorConfig& cfg, Execution execution) {
  spec.validate();
  std::vector<PoincareSample> samples(spec.I_grid.size());
  run_tasks(samples.size(), execution, [&](std::size_t i) {
    samples[i] = trace_orbit(spec, params, spec.I_grid[i], cfg).summary();
  });
  return samples;
}

TwistFit fit_twist(std::span<const PoincareSample> samples) {
  std::vector<const PoincareSample*> valid;
  for (const auto& s : samples)
    if (s.valid) valid.push_back(&s);
  if (valid.size() < 4) throw FitError("fit_twist: at least four valid samples are required");

  double lo = INFINITY;
  double hi = -INFINITY;
  double mean_I = 0.0;
  double mean_psi = 0.0;
  for (const auto* s : valid) {
    lo = std::min(lo, s->I_measured);
    hi = std::max(hi, s->I_measured);
    mean_I += s->I_measured;
    mean_psi += s->dpsi;
  }
  const double n = static_cast<double>(valid.size());
  mean_I /= n;
  mean_psi /= n;
  if (!(hi > lo) || (lo > 0.0 && hi < 10.0 * lo)) {
    throw FitError("fit_twist: samples must span a decade of I");
  }

  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto* s : valid) {
    sxx += (s->I_measured - mean_I) * (s->I_measured - mean_I);
    sxy += (s->I_measured - mean_I) * (s->dpsi - mean_psi);
  }
  TwistFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_psi - fit.slope * mean_I;
  double ss = 0.0;
  for (const auto* s : valid) {
    const double r = s->dpsi - (fit.intercept + fit.slope * s->I_measured);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.used = valid.size();
  return fit;
}

double parabola_reciprocal_twist(double I1, double alpha_e) {
  return -alpha_e * I1 * (1.0 - I1) / kPi;
}

std::vector<FigureRow> figure_experiment(std::span<const double> I1_grid, double a,
                                         double alpha_e, const FigureOptions& options,
                                         Execution execution) {
  const std::size_t n_actions = options.action_fractions.size();
  std::vector<FigureRow> rows(I1_grid.size());
  // Tasks are (grid point, action) pairs so small grids still spread out.
  std::vector<PoincareSample> samples(I1_grid.size() * n_actions);
  const auto errors = run_tasks(samples.size(), execution, [&](std::size_t k) {
    const double I1 = I1_grid[k / n_actions];
    const VehicleParams params(Vec3(I1, 1.0 - I1, 1.0), options.mass);
    SectionSpec spec;
    spec.alpha_e = alpha_e;
    spec.a = a;
    spec.theta = options.theta;
    spec.n_returns = options.n_returns;
    const double I0 = options.action_fractions[k % n_actions] * a;
    spec.I_grid = {I0};
    samples[k] = trace_orbit(spec, params, I0, options.integrator).summary();
  });

  for (std::size_t g = 0; g < I1_grid.size(); ++g) {
    FigureRow& row = rows[g];
    row.I1 = I1_grid[g];
    row.predicted = parabola_reciprocal_twist(row.I1, alpha_e);
    for (std::size_t j = 0; j < n_actions && row.error.empty(); ++j) {
      row.error = errors[g * n_actions + j];
    }
    if (!row.error.empty()) continue;
    try {
      const TwistFit fit =
          fit_twist(std::span(samples).subspan(g * n_actions, n_actions));
      row.measured = 1.0 / fit.slope;
      row.rel_err = std::abs(row.measured - row.predicted) / std::abs(row.predicted);
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  return rows;
}

}  // namespace uvstab
