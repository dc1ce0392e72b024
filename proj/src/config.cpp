#include "uvstab/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace uvstab {

using nlohmann::json;

namespace {

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError(join(path, key), "unknown key");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

double get_positive(const json& j, const std::string& path) {
  const double v = get_number(j, path);
  if (!(v > 0.0)) throw ConfigError(path, "must be positive");
  return v;
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

Vec3 get_vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(path, "expected an array of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) v[i] = get_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

std::vector<double> get_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

void parse_integrator(const json& j, IntegratorConfig& cfg) {
  const std::string p = "integrator";
  reject_unknown(j, p, {"rel_tol", "abs_tol", "max_step", "constraint_projection", "max_steps"});
  if (j.contains("rel_tol")) cfg.rel_tol = get_positive(j["rel_tol"], p + ".rel_tol");
  if (j.contains("abs_tol")) cfg.abs_tol = get_positive(j["abs_tol"], p + ".abs_tol");
  if (j.contains("max_step")) {
    cfg.max_step = j["max_step"].is_null() ? std::numeric_limits<double>::infinity()
                                           : get_positive(j["max_step"], p + ".max_step");
  }
  if (j.contains("constraint_projection")) {
    if (!j["constraint_projection"].is_boolean()) {
      throw ConfigError(p + ".constraint_projection", "expected a boolean");
    }
    cfg.constraint_projection = j["constraint_projection"].get<bool>();
  }
  if (j.contains("max_steps")) {
    const int n = get_int(j["max_steps"], p + ".max_steps");
    if (n <= 0) throw ConfigError(p + ".max_steps", "must be positive");
    cfg.max_steps = static_cast<std::size_t>(n);
  }
}

void parse_section(const json& j, SectionSpec& s, bool& has_grid) {
  const std::string p = "section";
  reject_unknown(j, p, {"a", "theta", "n_returns", "I_grid"});
  if (j.contains("a")) s.a = get_positive(j["a"], p + ".a");
  if (j.contains("theta")) s.theta = get_number(j["theta"], p + ".theta");
  if (j.contains("n_returns")) s.n_returns = get_int(j["n_returns"], p + ".n_returns");
  if (j.contains("I_grid")) {
    s.I_grid = get_list(j["I_grid"], p + ".I_grid");
    has_grid = true;
  }
}

PoissonState parse_original_state(const json& j, const std::string& p) {
  reject_unknown(j, p, {"pi", "p"});
  if (!j.contains("pi")) throw ConfigError(p + ".pi", "missing");
  if (!j.contains("p")) throw ConfigError(p + ".p", "missing");
  return {get_vec3(j["pi"], p + ".pi"), get_vec3(j["p"], p + ".p")};
}

BlownUpState parse_blown_state(const json& j, const std::string& p) {
  reject_unknown(j, p, {"w", "wdot", "a", "gamma"});
  for (const char* key : {"w", "wdot", "a", "gamma"}) {
    if (!j.contains(key)) throw ConfigError(p + "." + key, "missing");
  }
  BlownUpState s{get_vec3(j["w"], p + ".w"), get_vec3(j["wdot"], p + ".wdot"),
                 get_number(j["a"], p + ".a"), get_number(j["gamma"], p + ".gamma")};
  if (s.a < 0.0) throw ConfigError(p + ".a", "must be non-negative");
  if (!satisfies_constraints(s, 1e-9)) {
    throw ConfigError(p, "w must be a unit vector orthogonal to wdot");
  }
  return s;
}

void parse_simulate(const json& j, SimulateSettings& s) {
  const std::string p = "simulate";
  reject_unknown(j, p, {"t_final", "samples", "initial_original", "initial_blown"});
  if (j.contains("t_final")) s.t_final = get_positive(j["t_final"], p + ".t_final");
  if (j.contains("samples")) {
    s.samples = get_int(j["samples"], p + ".samples");
    if (s.samples < 2) throw ConfigError(p + ".samples", "must be at least 2");
  }
  if (j.contains("initial_original")) {
    s.initial_original = parse_original_state(j["initial_original"], p + ".initial_original");
  }
  if (j.contains("initial_blown")) {
    s.initial_blown = parse_blown_state(j["initial_blown"], p + ".initial_blown");
  }
}

void parse_figure(const json& j, FigureSettings& f) {
  const std::string p = "figure";
  reject_unknown(j, p, {"I1_grid", "action_fractions"});
  if (j.contains("I1_grid")) f.I1_grid = get_list(j["I1_grid"], p + ".I1_grid");
  if (j.contains("action_fractions")) {
    f.action_fractions = get_list(j["action_fractions"], p + ".action_fractions");
    for (std::size_t i = 0; i < f.action_fractions.size(); ++i) {
      if (f.action_fractions[i] < 0.0) {
        throw ConfigError(p + ".action_fractions[" + std::to_string(i) + "]",
                          "must be non-negative");
      }
    }
  }
}

}  // namespace

std::vector<double> default_figure_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 15; ++i) grid.push_back(0.15 + 0.05 * i);
  return grid;
}

SectionSpec RunConfig::section_spec() const {
  SectionSpec s = section;
  s.alpha_e = alpha_e;
  return s;
}

FigureOptions RunConfig::figure_options() const {
  FigureOptions o;
  o.integrator = integrator;
  o.n_returns = section.n_returns;
  o.theta = section.theta;
  o.action_fractions = figure.action_fractions;
  o.mass = params.mass();
  return o;
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.section.I_grid = default_action_grid(cfg.section.a);
  cfg.figure.I1_grid = default_figure_grid();
  return cfg;
}

RunConfig parse_config(const json& j) {
  reject_unknown(j, "",
                 {"version", "params", "alpha_e", "integrator", "section", "output_dir",
                  "simulate", "figure"});
  if (!j.contains("version")) throw ConfigError("version", "missing");
  if (get_int(j["version"], "version") != kConfigVersion) {
    throw ConfigError("version", "unsupported (expected " + std::to_string(kConfigVersion) + ")");
  }

  RunConfig cfg = default_config();
  if (j.contains("params")) {
    const json& p = j["params"];
    reject_unknown(p, "params", {"inertia", "mass"});
    Vec3 inertia = cfg.params.inertia();
    Vec3 mass = cfg.params.mass();
    if (p.contains("inertia")) inertia = get_vec3(p["inertia"], "params.inertia");
    if (p.contains("mass")) mass = get_vec3(p["mass"], "params.mass");
    try {
      cfg.params = VehicleParams(inertia, mass);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("params", e.what());
    }
  }
  if (j.contains("alpha_e")) cfg.alpha_e = get_number(j["alpha_e"], "alpha_e");
  if (j.contains("integrator")) parse_integrator(j["integrator"], cfg.integrator);

  bool has_grid = false;
  if (j.contains("section")) parse_section(j["section"], cfg.section, has_grid);
  if (!has_grid) cfg.section.I_grid = default_action_grid(cfg.section.a);

  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ConfigError("output_dir", "expected a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("simulate")) parse_simulate(j["simulate"], cfg.simulate);
  if (j.contains("figure")) parse_figure(j["figure"], cfg.figure);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& cfg) {
  json j;
  j["version"] = kConfigVersion;
  j["params"] = {{"inertia", vec_json(cfg.params.inertia())},
                 {"mass", vec_json(cfg.params.mass())}};
  j["alpha_e"] = cfg.alpha_e;

  const auto& ic = cfg.integrator;
  j["integrator"] = {{"rel_tol", ic.rel_tol},
                     {"abs_tol", ic.abs_tol},
                     {"max_step", std::isinf(ic.max_step) ? json(nullptr) : json(ic.max_step)},
                     {"constraint_projection", ic.constraint_projection},
                     {"max_steps", ic.max_steps}};
  j["section"] = {{"a", cfg.section.a},
                  {"theta", cfg.section.theta},
                  {"n_returns", cfg.section.n_returns},
                  {"I_grid", cfg.section.I_grid}};
  j["output_dir"] = cfg.output_dir.string();

  json sim = {{"t_final", cfg.simulate.t_final}, {"samples", cfg.simulate.samples}};
  if (cfg.simulate.initial_original) {
    sim["initial_original"] = {{"pi", vec_json(cfg.simulate.initial_original->pi)},
                               {"p", vec_json(cfg.simulate.initial_original->p)}};
  }
  if (cfg.simulate.initial_blown) {
    const auto& b = *cfg.simulate.initial_blown;
    sim["initial_blown"] = {
        {"w", vec_json(b.w)}, {"wdot", vec_json(b.wdot)}, {"a", b.a}, {"gamma", b.gamma}};
  }
  j["simulate"] = sim;
  j["figure"] = {{"I1_grid", cfg.figure.I1_grid},
                 {"action_fractions", cfg.figure.action_fractions}};
  return j;
}

}  // namespace uvstab
