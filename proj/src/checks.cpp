#include "uvstab/checks.hpp"

#include <algorithm>
#include <bit>
#include <complex>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "uvstab/blowup.hpp"
#include "uvstab/config.hpp"
#include "uvstab/csv.hpp"
#include "uvstab/dynamics.hpp"
#include "uvstab/normalform.hpp"
#include "uvstab/poincare.hpp"
#include "uvstab/systems.hpp"

namespace uvstab {

namespace {

constexpr double kPi = std::numbers::pi;

CheckResult below(std::string name, double measured, double tolerance, std::string detail = {}) {
  return {std::move(name), measured, tolerance, "<=", measured <= tolerance, std::move(detail)};
}

CheckResult above(std::string name, double measured, double threshold, std::string detail = {}) {
  return {std::move(name), measured, threshold, ">=", measured >= threshold, std::move(detail)};
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Vec3 gaussian3() {
    std::normal_distribution<double> n;
    return {n(rng_), n(rng_), n(rng_)};
  }

  Vec3 unit3() { return gaussian3().normalized(); }

  PoissonState poisson(double max_norm) {
    PoissonVector y;
    y << gaussian3(), gaussian3();
    y *= uniform(0.2, 1.0) * max_norm / y.norm();
    return unpack_poisson(y);
  }

  BlownUpState blown(double a_lo, double a_hi) {
    BlownUpState s;
    s.w = unit3();
    const Vec3 v = gaussian3();
    s.wdot = v - v.dot(s.w) * s.w;
    s.a = uniform(a_lo, a_hi);
    s.gamma = uniform(-2.0, 2.0);
    return s;
  }

  TangentPair tangent(const BlownUpState& s) {
    TangentPair d;
    const Vec3 u = gaussian3();
    d.dw = u - u.dot(s.w) * s.w;
    const Vec3 v = gaussian3();
    d.dwdot = v - (s.w.dot(v) + d.dw.dot(s.wdot)) * s.w;
    return d;
  }

  VehicleParams admissible_params() {
    for (;;) {
      const Vec3 inertia(uniform(0.2, 5.0), uniform(0.2, 5.0), uniform(0.2, 5.0));
      const double prod = (1.0 / inertia[2] - 1.0 / inertia[0]) * (1.0 / inertia[2] - 1.0 / inertia[1]);
      if (prod > 1e-3) return VehicleParams(inertia, Vec3(1.0, 2.0, 3.0));
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

double rel(double x, double ref) { return std::abs(x - ref) / std::max(std::abs(ref), 1e-300); }

const VehicleParams& reference_params() {
  static const VehicleParams p(Vec3(1.0, 2.0, 3.0), Vec3(1.0, 2.0, 3.0));
  return p;
}

struct ParamSet {
  VehicleParams params;
  double alpha_e;
};

std::vector<ParamSet> basis_parameter_sets() {
  return {{VehicleParams(Vec3(1.0, 2.0, 3.0), Vec3(1.0, 2.0, 3.0)), 2.0},
          {VehicleParams(Vec3(3.0, 2.0, 1.0), Vec3(1.0, 2.0, 3.0)), 1.0},
          {VehicleParams(Vec3(0.5, 0.8, 2.0), Vec3(1.0, 2.0, 3.0)), 0.7}};
}

const std::vector<double> kThetaGrid{0.1, 0.5, kPi / 2, 2.5};

// Dynamics

void dynamics_checks(std::vector<CheckResult>& out, Sampler& rng) {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  const VehicleParams& params = reference_params();

  double casimir = 0.0;
  double energy = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto traj = simulate_original(params, rng.poisson(5.0), 100.0, cfg);
    casimir = std::max({casimir,
                        max_relative_drift(traj, [](const PoissonVector& y) {
                          return unpack_poisson(y).p.norm();
                        }),
                        max_relative_drift(traj, [](const PoissonVector& y) {
                          const auto s = unpack_poisson(y);
                          return s.pi.dot(s.p);
                        })});
    energy = std::max(energy, max_relative_drift(traj, [&](const PoissonVector& y) {
                        return hamiltonian(unpack_poisson(y), params);
                      }));
  }
  out.push_back(below("dynamics.casimir_drift", casimir, 1e-8, "|p| and pi.p over t in [0,100]"));
  out.push_back(below("dynamics.energy_drift", energy, 1e-8, "H over t in [0,100]"));

  auto pi_norm = [](const PoissonVector& y) { return unpack_poisson(y).pi.norm(); };
  const auto leaf = simulate_original(params, {Vec3(0.3, -1.2, 2.0), Vec3::Zero()}, 100.0, cfg);
  out.push_back(below("dynamics.subcasimir_on_leaf", max_relative_drift(leaf, pi_norm), 1e-8,
                      "|pi| with p = 0"));
  const auto off = simulate_original(params, {Vec3(0.3, -1.2, 2.0), Vec3(0.5, 0.4, -0.3)}, 100.0, cfg);
  out.push_back(above("dynamics.subcasimir_off_leaf", max_relative_drift(off, pi_norm), 1e-6,
                      "|pi| must vary once p != 0"));

  double field = 0.0;
  for (double alpha : {-3.0, -0.5, 0.0, 0.25, 1.0, 7.0}) {
    const auto d = vector_field(equilibrium(alpha, params).state, params);
    field = std::max({field, d.dpi.cwiseAbs().maxCoeff(), d.dp.cwiseAbs().maxCoeff()});
  }
  out.push_back(below("dynamics.equilibrium_field_zero", field, 0.0, "exact zero"));
}

// Blow-up

void blowup_checks(std::vector<CheckResult>& out, Sampler& rng) {
  const VehicleParams& params = reference_params();

  double round_trip = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const BlownUpState s = rng.blown(1e-6, 2.0);
    const BlownUpState back = blow_up(blow_down(s));
    round_trip = std::max({round_trip, (back.w - s.w).norm(), (back.wdot - s.wdot).norm() / std::max(1.0, s.wdot.norm()),
                           rel(back.a, s.a), std::abs(back.gamma - s.gamma) / std::max(1.0, std::abs(s.gamma))});
    const PoissonState x = rng.poisson(3.0);
    const PoissonState x2 = blow_down(blow_up(x));
    const double scale = std::max(1.0, pack(x).norm());
    round_trip = std::max(round_trip, (pack(x2) - pack(x)).norm() / scale);
  }
  out.push_back(below("blowup.round_trip", round_trip, 1e-13, "1000 draws each way"));

  double commute = 0.0;
  for (int k = 0; k < 100; ++k) {
    const BlownUpState s = rng.blown(1e-3, 1.0);
    const PoissonTangent lhs = push_forward(s, blown_vector_field(s, params));
    const PoissonTangent rhs = vector_field(blow_down(s), params);
    const double scale = std::max(1.0, std::hypot(rhs.dpi.norm(), rhs.dp.norm()));
    commute = std::max(commute, std::hypot((lhs.dpi - rhs.dpi).norm(), (lhs.dp - rhs.dp).norm()) / scale);
  }
  out.push_back(below("blowup.field_commutation", commute, 1e-12, "100 points, a in [1e-3, 1]"));

  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  auto momentum = [](const BlownVector& y) { return so2_momentum(unpack_blown(y)).value; };
  BlownUpState s0 = rng.blown(0.0, 0.0);
  const auto free = simulate_blown(params, s0, 100.0, cfg);
  out.push_back(below("blowup.momentum_conserved_a0", max_relative_drift(free, momentum), 1e-8,
                      "J over t in [0,100] at a = 0"));
  s0.a = 0.5;
  const auto broken = simulate_blown(params, s0, 100.0, cfg);
  out.push_back(above("blowup.momentum_broken_a_pos", max_relative_drift(broken, momentum), 1e-6,
                      "J must vary for a > 0 and distinct masses"));

  double consistency = 0.0;
  for (int k = 0; k < 200; ++k) {
    const BlownUpState s = rng.blown(0.0, 2.0);
    consistency = std::max(consistency,
                           rel(blown_hamiltonian(s, params).total, hamiltonian(blow_down(s), params)));
  }
  out.push_back(below("blowup.hamiltonian_consistency", consistency, 1e-13));

  double antisym = 0.0;
  double min_sigma = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 200; ++k) {
    BlownUpState s = rng.blown(0.0, 1.0);
    s.gamma = rng.uniform(-10.0, 10.0);
    const TangentPair d1 = rng.tangent(s);
    const TangentPair d2 = rng.tangent(s);
    antisym = std::max(antisym, std::abs(symplectic_form(s, d1, d2) + symplectic_form(s, d2, d1)));

    Eigen::Matrix<double, 6, 4> raw;
    for (int j = 0; j < 4; ++j) raw.col(j) = rng.tangent(s).stacked();
    const Eigen::Matrix<double, 6, 4> q = Eigen::HouseholderQR<Eigen::Matrix<double, 6, 4>>(raw)
                                               .householderQ() *
                                           Eigen::Matrix<double, 6, 4>::Identity();
    Eigen::Matrix4d omega;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        omega(i, j) = symplectic_form(s, TangentPair::from_stacked(q.col(i)),
                                      TangentPair::from_stacked(q.col(j)));
      }
    }
    min_sigma = std::min(min_sigma, Eigen::JacobiSVD<Eigen::Matrix4d>(omega).singularValues()(3));
  }
  out.push_back(below("blowup.form_antisymmetric", antisym, 1e-13));
  out.push_back(above("blowup.form_nondegenerate", min_sigma, 1e-6,
                      "smallest singular value, orthonormal tangent basis, |gamma| <= 10"));

  double hamilton = 0.0;
  for (int k = 0; k < 200; ++k) {
    const BlownUpState s = rng.blown(0.0, 1.0);
    const TangentPair d = rng.tangent(s);
    const double lhs = symplectic_form(s, blown_vector_field(s, params), d);
    const double rhs = constrained_derivative(
        [&](const BlownUpState& x) { return blown_hamiltonian(x, params).total; }, s, d, 1e-4, true);
    hamilton = std::max(hamilton, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  out.push_back(below("blowup.hamilton_relation", hamilton, 1e-8, "200 points, a in [0, 1]"));

  double re_momentum = 0.0;
  double re_field = 0.0;
  for (double alpha : {0.3, 1.0, 2.5}) {
    for (double theta : kThetaGrid) {
      const BlownUpState s = blown_relative_equilibrium(alpha, theta);
      re_momentum = std::max(re_momentum, rel(s.gamma * s.gamma + s.wdot.squaredNorm(), alpha * alpha));
      const TangentPair z = shifted_field(s, params, -alpha / params.inertia()[2]);
      re_field = std::max({re_field, z.dw.norm(), z.dwdot.norm()});
    }
  }
  out.push_back(below("blowup.relative_equilibrium_momentum", re_momentum, 1e-14));
  out.push_back(below("blowup.relative_equilibrium_field", re_field, 1e-14,
                      "X_H0 - xi X_J vanishes at a = 0"));

  double leaf = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Vec3 pi = rng.gaussian3() * rng.uniform(0.5, 3.0);
    const double gamma = rng.uniform(-0.95, 0.95) * pi.norm();
    const Vec3 u = rng.gaussian3();
    const Vec3 v = rng.gaussian3();
    const Vec3 dpi1 = u - u.dot(pi) / pi.squaredNorm() * pi;
    const Vec3 dpi2 = v - v.dot(pi) / pi.squaredNorm() * pi;
    const LeafLift lift = lift_leaf_tangents(pi, gamma, dpi1, dpi2);
    const double lhs = symplectic_form(lift.base, lift.d1, lift.d2);
    leaf = std::max(leaf, std::abs(lhs - reduced_leaf_form(pi, dpi1, dpi2)));
  }
  out.push_back(below("blowup.reduced_form_identity", leaf, 1e-10, "200 leaf points"));
}

// Normal form

void normalform_checks(std::vector<CheckResult>& out, Sampler& rng, const VerifyOptions& options) {
  double twist = 0.0;
  double upsilon = 0.0;
  double linear = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const VehicleParams params = rng.admissible_params();
    const double alpha = rng.uniform(0.2, 5.0);
    twist = std::max(twist, rel(twist_condition(params, alpha).value, twist_factored(params, alpha)));
    upsilon = std::max(upsilon, rel(coefficients(params, alpha).upsilon_e, upsilon_from_inertia(params)));
    const double z = rng.uniform(-0.1, 2.0);
    linear = std::max(linear, rel(coefficients(params, alpha + z).omega_e,
                                  coefficients(params, alpha).omega_e * (alpha + z) / alpha));
  }
  out.push_back(below("normalform.twist_identity", twist, 1e-12, "1000 admissible draws"));
  out.push_back(below("normalform.upsilon_forms", upsilon, 1e-12, "1000 admissible draws"));
  out.push_back(below("normalform.spin_linearity", linear, 1e-12, "1000 admissible draws"));

  Eigen::Matrix4d standard;
  standard << 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0;
  const Eigen::RowVector4d dj_expected(0.0, 0.0, 0.0, 1.0);

  double canonical = 0.0;
  double dj = 0.0;
  double generator = 0.0;
  double tangency = 0.0;
  double lin = 0.0;
  for (const auto& set : basis_parameter_sets()) {
    NormalFormCoeffs expected = coefficients(set.params, set.alpha_e);
    if (options.inject_omega_sign_fault) expected.omega_e = -expected.omega_e;
    const Eigen::Matrix4d target = expected_linearization(expected);
    for (double theta : kThetaGrid) {
      const CanonicalBasis basis = canonical_basis(set.alpha_e, theta, set.params);
      canonical = std::max(canonical, (symplectic_matrix(basis) - standard).cwiseAbs().maxCoeff());
      dj = std::max(dj, (momentum_differential(basis) - dj_expected).cwiseAbs().maxCoeff());
      generator = std::max(generator, (basis.vectors[2].stacked() - so2_generator(basis.base).stacked())
                                          .cwiseAbs()
                                          .maxCoeff());
      for (const auto& v : basis.vectors) {
        tangency = std::max({tangency, std::abs(basis.base.w.dot(v.dw)),
                             std::abs(v.dw.dot(basis.base.wdot) + basis.base.w.dot(v.dwdot))});
      }
      lin = std::max(lin, (linearization(set.alpha_e, theta, set.params) - target).cwiseAbs().maxCoeff());
    }
  }
  out.push_back(below("normalform.basis_canonical", canonical, 1e-10, "3 parameter sets x 4 angles"));
  out.push_back(below("normalform.basis_momentum_differential", dj, 1e-10));
  out.push_back(below("normalform.basis_generator", generator, 1e-10, "v3 equals X_J"));
  out.push_back(below("normalform.basis_tangent", tangency, 1e-12));
  out.push_back(below("normalform.linearization", lin, 1e-6,
                      options.inject_omega_sign_fault ? "omega_e sign fault injected" : ""));

  double spectrum = 0.0;
  double eq_canonical = 0.0;
  double quartic = 0.0;
  double averaged = 0.0;
  for (const auto& set : basis_parameter_sets()) {
    const NormalFormCoeffs c = coefficients(set.params, set.alpha_e);
    const Eigen::Matrix4d lin0 = equilibrium_linearization(set.alpha_e, set.params);
    Eigen::Vector4cd ev = Eigen::EigenSolver<Eigen::Matrix4d>(lin0).eigenvalues();
    std::vector<std::complex<double>> got(ev.data(), ev.data() + 4);
    std::sort(got.begin(), got.end(), [](auto x, auto y) { return x.imag() < y.imag(); });
    const double w = std::abs(c.omega_e);
    const std::complex<double> want[4] = {{0.0, -w}, {0.0, 0.0}, {0.0, 0.0}, {0.0, w}};
    for (int i = 0; i < 4; ++i) spectrum = std::max(spectrum, std::abs(got[i] - want[i]));
    eq_canonical = std::max(eq_canonical, (symplectic_matrix(equilibrium_basis(set.alpha_e, set.params)) - standard)
                                              .cwiseAbs()
                                              .maxCoeff());
    quartic = std::max(quartic, std::abs(null_space_quartic(set.alpha_e, set.params).coefficient -
                                         1.0 / (8.0 * set.params.inertia()[2])));
    averaged = std::max(averaged, rel(upsilon_by_averaging(1e-3, set.params, set.alpha_e), c.upsilon_e));
  }
  out.push_back(below("normalform.equilibrium_spectrum", spectrum, 1e-6, "roots {+-i omega_e, 0, 0}"));
  out.push_back(below("normalform.equilibrium_basis_canonical", eq_canonical, 1e-10));
  out.push_back(below("normalform.equilibrium_quartic", quartic, 1e-6, "coefficient 1/(8 I3)"));
  out.push_back(below("normalform.upsilon_averaging", averaged, 1e-6, "psi-average at I = 1e-3"));
}

// Integrator

void integrate_checks(std::vector<CheckResult>& out) {
  const VehicleParams& params = reference_params();
  const ToleranceResponse response = tolerance_response(params);
  out.push_back(above("integrate.order_sanity", response.median, 2.0,
                      "median final-state error ratio when rel_tol is halved (40 runs)"));

  const auto traj = simulate_original(params, {Vec3(0.4, -0.9, 2.0), Vec3(0.1, 0.2, 0.3)}, 30.0, {});
  double endpoint = 0.0;
  for (std::size_t i = 0; i < traj.times().size(); ++i) {
    endpoint = std::max(endpoint, (traj(traj.times()[i]) - traj.states()[i]).cwiseAbs().maxCoeff());
  }
  out.push_back(below("integrate.dense_endpoints", endpoint, 0.0, "exact reproduction"));

  auto harmonic = [](double, const Eigen::Vector2d& y) { return Eigen::Vector2d(y[1], -y[0]); };
  const auto osc = integrate<2>(harmonic, Eigen::Vector2d(1.0, 0.0), 0.0, 2.0 * kPi * 20.5, IntegratorConfig{});
  const auto crossings = find_crossings(osc, [](const Eigen::Vector2d& y) { return y[0]; }, +1);
  double gap = std::numeric_limits<double>::infinity();
  double slack = 0.0;
  for (std::size_t k = 1; k < crossings.size(); ++k) {
    gap = std::min(gap, crossings[k].t - crossings[k - 1].t);
    slack = std::max(slack, 10.0 * std::numeric_limits<double>::epsilon() * crossings[k].t);
  }
  out.push_back(above("integrate.crossing_separation", crossings.size() >= 2 ? gap : 0.0, slack,
                      std::to_string(crossings.size()) + " crossings"));

  const auto period = integrate<2>(harmonic, Eigen::Vector2d(1.0, 0.0), 0.0, 2.0 * kPi, IntegratorConfig{});
  out.push_back(below("integrate.harmonic_period", (period.states().back() - Eigen::Vector2d(1.0, 0.0)).norm(), 1e-9));
}

// Return map

void poincare_checks(std::vector<CheckResult>& out) {
  const IntegratorConfig cfg;
  const VehicleParams params(Vec3(0.3, 0.7, 1.0), Vec3(1.0, 2.0, 3.0));

  SectionSpec spec;
  spec.a = 1e-2;
  const double jump = trace_orbit(spec, params, 0.5 * spec.a, cfg).max_action_jump();
  SectionSpec half = spec;
  half.a = 0.5 * spec.a;
  const double jump_half = trace_orbit(half, params, 0.5 * half.a, cfg).max_action_jump();
  const double ratio = jump / jump_half;
  out.push_back(above("poincare.action_drift_ratio", ratio, 4.0,
                      "measured exponent " + std::to_string(std::log2(ratio)) + " in a"));

  spec.I_grid = default_action_grid(spec.a);
  const auto samples = poincare_map(spec, params, cfg);
  double affine = std::numeric_limits<double>::infinity();
  try {
    const TwistFit fit = fit_twist(samples);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : samples) {
      if (!s.valid) continue;
      lo = std::min(lo, s.I_measured);
      hi = std::max(hi, s.I_measured);
    }
    affine = fit.residual / std::abs(fit.slope * (hi - lo));
  } catch (const FitError&) {
  }
  out.push_back(below("poincare.twist_affine", affine, 0.05, "fit residual / (slope * span)"));

  SectionSpec low = spec;
  low.I_grid = {1e-4 * spec.a};
  const auto near = poincare_map(low, params, cfg);
  const double period = -2.0 * kPi / coefficients(params, spec.alpha_e).xi_e;
  out.push_back(below("poincare.return_time", near.front().valid ? rel(near.front().T_measured, period) : 1.0,
                      0.01, "I0 -> 0 at a = 1e-2"));

  const FigureOptions options;
  const auto grid = default_figure_grid();
  auto worst = [](const std::vector<FigureRow>& rows) {
    double e = 0.0;
    for (const auto& r : rows) e = std::max(e, r.ok ? r.rel_err : std::numeric_limits<double>::infinity());
    return e;
  };
  const double err = worst(figure_experiment(grid, 1e-2, 1.0, options));
  const double err_half = worst(figure_experiment(grid, 5e-3, 1.0, options));
  out.push_back(below("poincare.figure_pointwise", err, 0.1, "15 grid points, a = 1e-2"));
  out.push_back(below("poincare.figure_convergence", err_half / err, 1.0,
                      "max error at a = 5e-3 over max error at a = 1e-2"));
}

// Serialization

void cli_checks(std::vector<CheckResult>& out, Sampler& rng) {
  int config_mismatch = 0;
  RunConfig custom = default_config();
  custom.alpha_e = 2.5;
  custom.integrator.max_step = 0.125;
  custom.section.theta = 1.1;
  custom.simulate.initial_original = PoissonState{Vec3(0.1, 0.2, 0.3), Vec3(1.0 / 3.0, 0.0, -2.0)};
  custom.simulate.initial_blown = blown_relative_equilibrium(1.7, 0.9);
  for (const RunConfig& cfg : {default_config(), custom}) {
    const nlohmann::json once = to_json(cfg);
    const nlohmann::json twice = to_json(parse_config(nlohmann::json::parse(once.dump())));
    if (once != twice) ++config_mismatch;
  }
  out.push_back(below("cli.config_round_trip", config_mismatch, 0.0, "mismatching configs"));

  std::vector<double> values;
  std::uniform_int_distribution<std::uint64_t> bits;
  while (values.size() < 2000) {
    const double v = std::bit_cast<double>(bits(rng.engine()));
    if (std::isfinite(v)) values.push_back(v);
  }
  for (double v : {0.0, -0.0, 1.0 / 3.0, 5e-324, std::numeric_limits<double>::max()}) values.push_back(v);
  std::stringstream buffer;
  CsvWriter writer(buffer);
  writer.header({"x"});
  for (double v : values) {
    writer.field(v);
    writer.end_row();
  }
  const NumericTable table = read_numeric_csv(buffer);
  int csv_mismatch = table.rows.size() == values.size() ? 0 : 1;
  for (std::size_t i = 0; i < std::min(values.size(), table.rows.size()); ++i) {
    if (std::bit_cast<std::uint64_t>(table.rows[i][0]) != std::bit_cast<std::uint64_t>(values[i])) {
      ++csv_mismatch;
    }
  }
  out.push_back(below("cli.csv_round_trip", csv_mismatch, 0.0, "bit mismatches over 2005 values"));
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  std::size_t failed = 0;
  for (const auto& c : checks) {
    if (!c.passed) ++failed;
    nlohmann::json entry = {{"name", c.name},
                            {"measured", std::isfinite(c.measured) ? nlohmann::json(c.measured)
                                                                   : nlohmann::json(format_double(c.measured))},
                            {"tolerance", c.tolerance},
                            {"relation", c.relation},
                            {"passed", c.passed}};
    if (!c.detail.empty()) entry["detail"] = c.detail;
    list.push_back(entry);
  }
  return {{"passed", failed == 0}, {"total", checks.size()}, {"failed", failed}, {"checks", list}};
}

VerifyReport run_invariant_suite(const VerifyOptions& options) {
  VerifyReport report;
  Sampler rng(options.seed);
  auto guard = [&](const char* group, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      report.checks.push_back({std::string(group) + ".exception", 1.0, 0.0, "<=", false, e.what()});
    }
  };
  guard("dynamics", [&] { dynamics_checks(report.checks, rng); });
  guard("blowup", [&] { blowup_checks(report.checks, rng); });
  guard("normalform", [&] { normalform_checks(report.checks, rng, options); });
  guard("integrate", [&] { integrate_checks(report.checks); });
  if (options.include_poincare) guard("poincare", [&] { poincare_checks(report.checks); });
  guard("cli", [&] { cli_checks(report.checks, rng); });
  return report;
}

}  // namespace uvstab
