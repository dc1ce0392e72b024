// Adaptive Dormand-Prince 5(4) integration with continuous output and
// section-crossing location on the interpolant.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

namespace uvstab {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  /// Renormalize w and re-project wdot after every accepted step (blown-up
  /// states only; ignored for fields without a projector).
  bool constraint_projection = true;
  std::size_t max_steps = 50'000'000;

  void validate() const;
};

class IntegrationError : public std::runtime_error {
 public:
  enum class Kind { step_underflow, non_finite, too_many_steps };

  IntegrationError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Accepted steps and their dense interpolants. times() is strictly
/// increasing; evaluation at a stored time returns the stored state.
template <int N>
class Trajectory {
 public:
  using State = Eigen::Matrix<double, N, 1>;

  const std::vector<double>& times() const { return times_; }
  const std::vector<State>& states() const { return states_; }
  std::size_t num_steps() const { return dense_.size(); }
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }

  /// Interpolant of step i on [times()[i], times()[i+1]].
  State in_step(std::size_t i, double t) const {
    if (t == times_[i]) return states_[i];
    if (t == times_[i + 1]) return states_[i + 1];
    const auto& r = dense_[i];
    const double h = times_[i + 1] - times_[i];
    const double s = (t - times_[i]) / h;
    const double s1 = 1.0 - s;
    return r[0] + s * (r[1] + s1 * (r[2] + s * (r[3] + s1 * r[4])));
  }

  /// Dense evaluation anywhere in [t_begin, t_end].
  State operator()(double t) const {
    if (t <= times_.front()) return states_.front();
    if (t >= times_.back()) return states_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return in_step(static_cast<std::size_t>(it - times_.begin()) - 1, t);
  }

  void start(double t0, const State& y0) {
    times_.assign(1, t0);
    states_.assign(1, y0);
    dense_.clear();
  }
  void append(double t1, const State& y1, const std::array<State, 5>& coeffs) {
    times_.push_back(t1);
    states_.push_back(y1);
    dense_.push_back(coeffs);
  }

 private:
  std::vector<double> times_;
  std::vector<State> states_;
  std::vector<std::array<State, 5>> dense_;
};

namespace detail {

// Dormand-Prince 5(4) tableau with Hairer's continuous extension.
struct DormandPrince {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                          d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                          d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
};

template <int N>
double error_norm(const Eigen::Matrix<double, N, 1>& err, const Eigen::Matrix<double, N, 1>& y0,
                  const Eigen::Matrix<double, N, 1>& y1, double atol, double rtol) {
  const auto scale = (atol + rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).matrix();
  return std::sqrt(err.cwiseQuotient(scale).squaredNorm() / N);
}

struct NoProjection {
  template <class V>
  void operator()(V&) const {}
};

}  // namespace detail

/// Integrates dy/dt = field(t, y) over [t0, t1] (t1 > t0). After each
/// accepted step project(y) is applied when cfg.constraint_projection is set.
template <int N, class Field, class Projector = detail::NoProjection>
Trajectory<N> integrate(Field&& field, const Eigen::Matrix<double, N, 1>& y0, double t0,
                        double t1, const IntegratorConfig& cfg, Projector project = {}) {
  using State = Eigen::Matrix<double, N, 1>;
  using T = detail::DormandPrince;
  cfg.validate();
  if (!(t1 > t0)) throw std::invalid_argument("integrate: t1 must exceed t0");
  if (!y0.allFinite()) {
    throw IntegrationError(IntegrationError::Kind::non_finite, "integrate: non-finite initial state");
  }

  Trajectory<N> traj;
  traj.start(t0, y0);

  const double atol = cfg.abs_tol;
  const double rtol = cfg.rel_tol;
  const double span = t1 - t0;
  const double max_step = std::min(cfg.max_step, span);

  State y = y0;
  State k1 = field(t0, y);

  // Initial step after Hairer, Norsett and Wanner, II.4.
  double h;
  {
    const State scale = (atol + rtol * y.cwiseAbs().array()).matrix();
    const double d0 = std::sqrt(y.cwiseQuotient(scale).squaredNorm() / N);
    const double d1 = std::sqrt(k1.cwiseQuotient(scale).squaredNorm() / N);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, max_step);
    const State y_trial = y + h0 * k1;
    const State k_trial = field(t0 + h0, y_trial);
    const double d2 = std::sqrt((k_trial - k1).cwiseQuotient(scale).squaredNorm() / N) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min({100.0 * h0, h1, max_step});
  }

  constexpr double safety = 0.9;
  constexpr double fac_min = 0.2;
  constexpr double fac_max = 10.0;
  constexpr double beta = 0.04;
  double err_old = 1e-4;
  bool last_rejected = false;
  int non_finite_retries = 0;
  double t = t0;
  std::size_t steps = 0;

  while (t < t1) {
    if (++steps > cfg.max_steps) {
      throw IntegrationError(IntegrationError::Kind::too_many_steps, "integrate: step limit reached");
    }
    if (h < 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      throw IntegrationError(IntegrationError::Kind::step_underflow,
                             "integrate: step size underflow at t = " + std::to_string(t));
    }
    bool final_step = false;
    if (t + h >= t1) {
      h = t1 - t;
      final_step = true;
    }

    const State k2 = field(t + T::c2 * h, State(y + h * (T::a21 * k1)));
    const State k3 = field(t + T::c3 * h, State(y + h * (T::a31 * k1 + T::a32 * k2)));
    const State k4 =
        field(t + T::c4 * h, State(y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3)));
    const State k5 = field(
        t + T::c5 * h, State(y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4)));
    const State k6 = field(t + h, State(y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 +
                                                 T::a64 * k4 + T::a65 * k5)));
    State y_new = y + h * (T::a71 * k1 + T::a73 * k3 + T::a74 * k4 + T::a75 * k5 + T::a76 * k6);
    const State k7 = field(t + h, y_new);
    const State err =
        h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);
    const double e = detail::error_norm<N>(err, y, y_new, atol, rtol);

    if (!std::isfinite(e) || !y_new.allFinite()) {
      if (++non_finite_retries > 60) {
        throw IntegrationError(IntegrationError::Kind::non_finite,
                               "integrate: non-finite state at t = " + std::to_string(t));
      }
      h *= 0.25;
      last_rejected = true;
      continue;
    }
    non_finite_retries = 0;

    if (e <= 1.0) {
      const double t_new = final_step ? t1 : t + h;
      State k_next = k7;
      if constexpr (!std::is_same_v<Projector, detail::NoProjection>) {
        if (cfg.constraint_projection) {
          project(y_new);
          k_next = field(t_new, y_new);
        }
      }
      std::array<State, 5> r;
      const State diff = y_new - y;
      const State bspl = h * k1 - diff;
      r[0] = y;
      r[1] = diff;
      r[2] = bspl;
      r[3] = diff - h * k7 - bspl;
      r[4] = h * (T::d1 * k1 + T::d3 * k3 + T::d4 * k4 + T::d5 * k5 + T::d6 * k6 + T::d7 * k7);
      traj.append(t_new, y_new, r);

      y = y_new;
      k1 = k_next;
      t = t_new;

      double factor = safety * std::pow(std::max(e, 1e-10), -0.2 + 0.75 * beta) *
                      std::pow(err_old, beta);
      factor = std::clamp(factor, fac_min, fac_max);
      if (last_rejected) factor = std::min(factor, 1.0);
      err_old = std::max(e, 1e-4);
      h = std::min(h * factor, max_step);
      last_rejected = false;
    } else {
      h *= std::max(fac_min, safety * std::pow(e, -0.2));
      last_rejected = true;
    }
  }
  return traj;
}

/// A located zero of the event function.
template <int N>
struct Crossing {
  double t = 0.0;
  Eigen::Matrix<double, N, 1> state;
};

/// Zeros of event(state) along the trajectory where the event changes sign
/// in the requested direction (+1 upward, -1 downward, 0 either). Points where
/// the event is exactly zero are skipped when bracketing, so grazing contacts
/// are not reported. Each step is subdivided before bracketing.
template <int N, class Event>
std::vector<Crossing<N>> find_crossings(const Trajectory<N>& traj, Event&& event, int direction,
                                        double event_tol = 1e-10, int subdivisions = 4) {
  using State = Eigen::Matrix<double, N, 1>;
  std::vector<Crossing<N>> out;
  bool have_prev = false;
  double t_prev = 0.0;
  double g_prev = 0.0;

  auto consider = [&](double t, double g) {
    if (g == 0.0) return;
    if (have_prev && ((g_prev < 0.0) != (g < 0.0))) {
      const int sense = g > 0.0 ? 1 : -1;
      if (direction == 0 || direction == sense) {
        auto g_at = [&](double tau) { return static_cast<double>(event(traj(tau))); };
        std::uintmax_t iterations = 200;
        const auto root = boost::math::tools::toms748_solve(
            g_at, t_prev, t, g_prev, g, boost::math::tools::eps_tolerance<double>(52), iterations);
        double t_star = root.first;
        if (std::abs(g_at(root.second)) < std::abs(g_at(root.first))) t_star = root.second;
        State s = traj(t_star);
        if (std::abs(event(s)) <= event_tol) out.push_back({t_star, std::move(s)});
      }
    }
    have_prev = true;
    t_prev = t;
    g_prev = g;
  };

  const auto& times = traj.times();
  consider(times[0], event(traj.states()[0]));
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double ta = times[i];
    const double tb = times[i + 1];
    for (int k = 1; k < subdivisions; ++k) {
      const double tk = ta + (tb - ta) * k / subdivisions;
      consider(tk, event(traj.in_step(i, tk)));
    }
    consider(tb, event(traj.states()[i + 1]));
  }
  return out;
}

}  // namespace uvstab
