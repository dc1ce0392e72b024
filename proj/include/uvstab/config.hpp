// JSON run configuration shared by every subcommand.

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uvstab/blowup.hpp"
#include "uvstab/dynamics.hpp"
#include "uvstab/integrate.hpp"
#include "uvstab/poincare.hpp"

namespace uvstab {

inline constexpr int kConfigVersion = 1;

/// Invalid configuration. The message starts with the offending key path,
/// for example "integrator.rel_tol: must be positive".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct SimulateSettings {
  double t_final = 100.0;
  /// Output rows, evenly spaced in time and including both ends.
  int samples = 1001;
  /// Starting point for the original system. Defaults to the spinning
  /// equilibrium at alpha_e.
  std::optional<PoissonState> initial_original;
  /// Starting point for the blown-up system. Defaults to the blown-up
  /// relative equilibrium at section.theta with a = section.a.
  std::optional<BlownUpState> initial_blown;
};

struct FigureSettings {
  std::vector<double> I1_grid;
  std::vector<double> action_fractions{0.08, 0.15, 0.3, 0.55, 1.0};
};

struct RunConfig {
  VehicleParams params{Vec3(1.0, 2.0, 3.0), Vec3(1.0, 2.0, 3.0)};
  double alpha_e = 1.0;
  IntegratorConfig integrator;
  /// section.alpha_e mirrors alpha_e; section.I_grid defaults to
  /// default_action_grid(section.a).
  SectionSpec section;
  std::filesystem::path output_dir = "out";
  SimulateSettings simulate;
  FigureSettings figure;

  SectionSpec section_spec() const;
  FigureOptions figure_options() const;
};

/// 15 evenly spaced points on [0.15, 0.85].
std::vector<double> default_figure_grid();

RunConfig default_config();
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace uvstab
