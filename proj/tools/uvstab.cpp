// Command-line driver: simulate, coeffs, figure, poincare, verify.
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error,
// 3 integration failure, 4 intermediate-axis (or degenerate-axis) error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "uvstab/checks.hpp"
#include "uvstab/config.hpp"
#include "uvstab/csv.hpp"
#include "uvstab/normalform.hpp"
#include "uvstab/poincare.hpp"
#include "uvstab/systems.hpp"

namespace fs = std::filesystem;
using namespace uvstab;

namespace {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kIntegrationError = 3, kAxisError = 4 };

struct GlobalOptions {
  std::string config_path;
  std::string out_dir;
  std::string system = "original";
  std::uint64_t seed = 0;
};

RunConfig resolve_config(const GlobalOptions& g) {
  RunConfig cfg = g.config_path.empty() ? default_config() : load_config(g.config_path);
  if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
  return cfg;
}

fs::path prepare_output(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw ConfigError("output_dir", "cannot create " + cfg.output_dir.string() + ": " + ec.message());
  return cfg.output_dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("output_dir", "cannot write " + path.string());
  return out;
}

int cmd_simulate(const GlobalOptions& g) {
  const RunConfig cfg = resolve_config(g);
  const auto& sim = cfg.simulate;
  const VehicleParams& params = cfg.params;
  const fs::path path = prepare_output(cfg) / "trajectory.csv";
  std::ofstream out = open_output(path);
  CsvWriter csv(out);

  double drift_h = 0.0;
  double drift_c1 = 0.0;
  double drift_c2 = 0.0;
  double drift_j = 0.0;
  auto track = [](double& worst, double value, double initial) {
    worst = std::max(worst, std::abs(value - initial) / std::max(std::abs(initial), 1.0));
  };

  if (g.system == "original") {
    const PoissonState s0 = sim.initial_original.value_or(equilibrium(cfg.alpha_e, params).state);
    const Trajectory<6> traj = simulate_original(params, s0, sim.t_final, cfg.integrator);
    csv.header({"t", "pi_x", "pi_y", "pi_z", "p_x", "p_y", "p_z", "H", "p_norm", "pi_dot_p", "pi_norm"});
    const double h0 = hamiltonian(s0, params);
    const Casimirs c0 = casimirs(s0);
    for (int k = 0; k < sim.samples; ++k) {
      const double t = sim.t_final * k / (sim.samples - 1);
      const PoissonVector y = traj(t);
      const PoissonState s = unpack_poisson(y);
      const double h = hamiltonian(s, params);
      const Casimirs c = casimirs(s);
      csv.field(t);
      for (int i = 0; i < 6; ++i) csv.field(y[i]);
      csv.field(h).field(c.p_norm).field(c.pi_dot_p).field(c.pi_norm);
      csv.end_row();
      track(drift_h, h, h0);
      track(drift_c1, c.p_norm, c0.p_norm);
      track(drift_c2, c.pi_dot_p, c0.pi_dot_p);
    }
    std::cout << "max drift: H=" << format_double(drift_h) << " p_norm=" << format_double(drift_c1)
              << " pi_dot_p=" << format_double(drift_c2) << '\n';
  } else {
    BlownUpState s0 = sim.initial_blown.value_or(blown_relative_equilibrium(cfg.alpha_e, cfg.section.theta));
    if (!sim.initial_blown) s0.a = cfg.section.a;
    const Trajectory<8> traj = simulate_blown(params, s0, sim.t_final, cfg.integrator);
    csv.header({"t", "w_x", "w_y", "w_z", "wdot_x", "wdot_y", "wdot_z", "a", "gamma", "H", "J",
                "p_norm", "pi_dot_p"});
    const double h0 = blown_hamiltonian(s0, params).total;
    const double j0 = so2_momentum(s0).value;
    for (int k = 0; k < sim.samples; ++k) {
      const double t = sim.t_final * k / (sim.samples - 1);
      const BlownVector y = traj(t);
      const BlownUpState s = unpack_blown(y);
      const double h = blown_hamiltonian(s, params).total;
      const double j = so2_momentum(s).value;
      csv.field(t);
      for (int i = 0; i < 8; ++i) csv.field(y[i]);
      csv.field(h).field(j).field(s.a).field(s.a * s.gamma);
      csv.end_row();
      track(drift_h, h, h0);
      track(drift_j, j, j0);
    }
    std::cout << "max drift: H=" << format_double(drift_h) << " J=" << format_double(drift_j) << '\n';
  }
  std::cout << "wrote " << path.string() << '\n';
  return kOk;
}

int cmd_coeffs(const GlobalOptions& g) {
  const RunConfig cfg = resolve_config(g);
  const NormalFormCoeffs c = coefficients(cfg.params, cfg.alpha_e);
  const TwistCondition twist = twist_condition(cfg.params, cfg.alpha_e);
  const nlohmann::json j = {{"alpha_e", c.alpha_e},     {"D", c.D},         {"omega_e", c.omega_e},
                            {"kappa_e", c.kappa_e},     {"upsilon_e", c.upsilon_e}, {"c4", c.c4},
                            {"xi_e", c.xi_e},           {"mu_e", c.mu_e},   {"twist", twist.value},
                            {"satisfied", twist.satisfied}};
  std::cout << j.dump(2) << '\n';
  if (!g.out_dir.empty()) open_output(prepare_output(cfg) / "coeffs.json") << j.dump(2) << '\n';
  return kOk;
}

void write_plot_script(const fs::path& path, double alpha_e) {
  std::ofstream gp = open_output(path);
  gp << "set datafile separator ','\n"
     << "set terminal pngcairo size 800,600\n"
     << "set output 'figure.png'\n"
     << "set xlabel 'I_1'\n"
     << "set ylabel 'I / h(I)'\n"
     << "set key bottom center\n"
     << "alpha = " << format_double(alpha_e) << '\n'
     << "predicted(x) = -alpha * x * (1 - x) / pi\n"
     << "plot [0:1] predicted(x) with lines lw 2 title 'predicted', \\\n"
     << "     'figure.csv' every ::1 using 1:2 with points pt 7 title 'measured'\n";
}

int cmd_figure(const GlobalOptions& g) {
  const RunConfig cfg = resolve_config(g);
  const fs::path dir = prepare_output(cfg);
  const auto rows = figure_experiment(cfg.figure.I1_grid, cfg.section.a, cfg.alpha_e, cfg.figure_options());
  std::ofstream out = open_output(dir / "figure.csv");
  CsvWriter csv(out);
  csv.header({"I1", "measured", "predicted", "rel_err"});
  double worst = 0.0;
  for (const auto& r : rows) {
    csv.field(r.I1).field(r.ok ? r.measured : NAN).field(r.predicted).field(r.ok ? r.rel_err : NAN);
    csv.end_row();
    if (r.ok) {
      worst = std::max(worst, r.rel_err);
    } else {
      std::cerr << "I1=" << format_double(r.I1) << ": " << r.error << '\n';
    }
  }
  write_plot_script(dir / "figure.gp", cfg.alpha_e);
  std::cout << rows.size() << " rows, max rel_err=" << format_double(worst) << "\nwrote "
            << (dir / "figure.csv").string() << " and " << (dir / "figure.gp").string() << '\n';
  return kOk;
}

int cmd_poincare(const GlobalOptions& g) {
  const RunConfig cfg = resolve_config(g);
  const fs::path dir = prepare_output(cfg);
  const auto samples = poincare_map(cfg.section_spec(), cfg.params, cfg.integrator);
  std::ofstream out = open_output(dir / "poincare.csv");
  CsvWriter csv(out);
  csv.header({"I", "dpsi", "T", "valid"});
  for (const auto& s : samples) {
    csv.field(s.I_measured).field(s.dpsi).field(s.T_measured).field(s.valid ? 1.0 : 0.0);
    csv.end_row();
  }
  try {
    const TwistFit fit = fit_twist(samples);
    std::cout << "slope=" << format_double(fit.slope) << " predicted=" << format_double(twist_slope(cfg.params, cfg.alpha_e))
              << " intercept=" << format_double(fit.intercept) << '\n';
  } catch (const FitError& e) {
    std::cout << "no twist fit: " << e.what() << '\n';
  }
  std::cout << "wrote " << (dir / "poincare.csv").string() << '\n';
  return kOk;
}

int cmd_verify(const GlobalOptions& g, const std::string& fault, bool skip_poincare) {
  VerifyOptions options;
  if (fault == "omega-sign") {
    options.inject_omega_sign_fault = true;
  } else if (!fault.empty()) {
    throw ConfigError("--inject-fault", "unknown fault '" + fault + "'");
  }
  options.include_poincare = !skip_poincare;
  const VerifyReport report = run_invariant_suite(options);
  const std::string text = report.to_json().dump(2);
  std::cout << text << '\n';
  if (!g.out_dir.empty()) {
    fs::create_directories(g.out_dir);
    open_output(fs::path(g.out_dir) / "verify.json") << text << '\n';
  }
  return report.all_passed() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability experiments for the underwater vehicle relative equilibria"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON configuration file");
  app.add_option("--out", g.out_dir, "Output directory (overrides output_dir)");
  app.add_option("--seed", g.seed, "Reserved; every computation is deterministic");

  auto* simulate = app.add_subcommand("simulate", "Integrate one trajectory and write trajectory.csv");
  simulate->add_option("--system", g.system, "original or blownup")
      ->check(CLI::IsMember({"original", "blownup"}));
  auto* coeffs = app.add_subcommand("coeffs", "Print the normal-form coefficients as JSON");
  auto* figure = app.add_subcommand("figure", "Measured vs predicted I/h(I) over the I1 grid");
  auto* poincare = app.add_subcommand("poincare", "Return-map samples over the section action grid");
  auto* verify = app.add_subcommand("verify", "Run the invariant suite and print a JSON report");
  std::string fault;
  bool skip_poincare = false;
  verify->add_option("--inject-fault", fault)->group("");
  verify->add_flag("--skip-poincare", skip_poincare, "Omit the return-map experiments");

  // Global options may also follow the subcommand name.
  for (auto* sub : {simulate, coeffs, figure, poincare, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*simulate) return cmd_simulate(g);
    if (*coeffs) return cmd_coeffs(g);
    if (*figure) return cmd_figure(g);
    if (*poincare) return cmd_poincare(g);
    if (*verify) return cmd_verify(g, fault, skip_poincare);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IntegrationError& e) {
    std::cerr << "integration failure: " << e.what() << '\n';
    return kIntegrationError;
  } catch (const NormalFormError& e) {
    switch (e.kind()) {
      case NormalFormError::Kind::intermediate_axis:
        std::cerr << "intermediate axis error: " << e.what() << '\n';
        return kAxisError;
      case NormalFormError::Kind::degenerate_axis:
        std::cerr << "degenerate axis error: " << e.what() << '\n';
        return kAxisError;
      default:
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "run failure: " << e.what() << '\n';
    return kIntegrationError;
  }
  return kOk;
}
