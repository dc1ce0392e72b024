#include <gtest/gtest.h>

#include <bit>
#include <fstream>
#include <limits>
#include <sstream>

#include "test_support.hpp"
#include "uvstab/config.hpp"
#include "uvstab/csv.hpp"

using namespace uvstab;
using nlohmann::json;

namespace {

std::string error_path(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST(Config, DefaultsWhenOnlyVersionIsGiven) {
  const RunConfig cfg = parse_config(json{{"version", 1}});
  EXPECT_EQ(cfg.params.inertia(), Vec3(1, 2, 3));
  EXPECT_EQ(cfg.alpha_e, 1.0);
  EXPECT_EQ(cfg.integrator.rel_tol, 1e-10);
  EXPECT_EQ(cfg.section.a, 1e-2);
  EXPECT_EQ(cfg.section.n_returns, 32);
  EXPECT_EQ(cfg.section.I_grid, default_action_grid(1e-2));
  ASSERT_EQ(cfg.figure.I1_grid.size(), 15u);
  EXPECT_DOUBLE_EQ(cfg.figure.I1_grid.front(), 0.15);
  EXPECT_DOUBLE_EQ(cfg.figure.I1_grid.back(), 0.85);
}

TEST(Config, ActionGridFollowsA) {
  const RunConfig cfg = parse_config(json{{"version", 1}, {"section", {{"a", 5e-3}}}});
  EXPECT_EQ(cfg.section.I_grid, default_action_grid(5e-3));
  EXPECT_EQ(cfg.section_spec().alpha_e, cfg.alpha_e);
}

TEST(Config, ErrorsCarryTheKeyPath) {
  EXPECT_EQ(error_path(json::object()), "version");
  EXPECT_EQ(error_path(json{{"version", 2}}), "version");
  EXPECT_EQ(error_path(json{{"version", 1}, {"colour", "red"}}), "colour");
  EXPECT_EQ(error_path(json{{"version", 1}, {"integrator", {{"rtol", 1e-9}}}}), "integrator.rtol");
  EXPECT_EQ(error_path(json{{"version", 1}, {"integrator", {{"rel_tol", -1}}}}), "integrator.rel_tol");
  EXPECT_EQ(error_path(json{{"version", 1}, {"params", {{"inertia", {1, 2}}}}}), "params.inertia");
  EXPECT_EQ(error_path(json{{"version", 1}, {"params", {{"mass", {1, "x", 3}}}}}), "params.mass[1]");
  EXPECT_EQ(error_path(json{{"version", 1}, {"params", {{"inertia", {1, -2, 3}}}}}), "params");
  EXPECT_EQ(error_path(json{{"version", 1}, {"section", {{"n_returns", 2.5}}}}), "section.n_returns");
  EXPECT_EQ(error_path(json{{"version", 1}, {"figure", {{"I1_grid", {0.2, "a"}}}}}), "figure.I1_grid[1]");
  EXPECT_EQ(error_path(json{{"version", 1}, {"simulate", {{"initial_blown", {{"w", {1, 0, 0}}}}}}}),
            "simulate.initial_blown.wdot");
  EXPECT_EQ(error_path(json{{"version", 1},
                            {"simulate",
                             {{"initial_blown", {{"w", {1, 0, 0}}, {"wdot", {1, 0, 0}}, {"a", 0}, {"gamma", 0}}}}}}),
            "simulate.initial_blown");
  EXPECT_EQ(error_path(json{{"version", 1}, {"output_dir", 3}}), "output_dir");
}

TEST(Config, MessageStartsWithPath) {
  try {
    parse_config(json{{"version", 1}, {"integrator", {{"bogus", 1}}}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()), "integrator.bogus: unknown key");
  }
}

TEST(Config, RoundTripIsIdentity) {
  RunConfig cfg = default_config();
  cfg.params = VehicleParams(Vec3(0.3, 0.7, 1.0), Vec3(1.0 / 3.0, 2, 3));
  cfg.alpha_e = 2.5;
  cfg.integrator.rel_tol = 3e-11;
  cfg.integrator.max_step = 0.1;
  cfg.integrator.constraint_projection = false;
  cfg.section.theta = 1.234567890123;
  cfg.section.I_grid = {1e-4, 2e-4};
  cfg.output_dir = "results/run 1";
  cfg.simulate.samples = 17;
  cfg.simulate.initial_original = PoissonState{Vec3(0.1, 0.2, 0.3), Vec3(0.7, -0.1, 1e-17)};
  cfg.simulate.initial_blown = BlownUpState{Vec3(0, 0, 1), Vec3(0.5, 0, 0), 0.0, 2.0};
  cfg.figure.I1_grid = {0.5};

  for (const RunConfig& c : {default_config(), cfg}) {
    const json first = to_json(c);
    const RunConfig back = parse_config(json::parse(first.dump()));
    EXPECT_EQ(to_json(back), first);
    EXPECT_EQ(back.params, c.params);
    EXPECT_EQ(back.integrator.max_step, c.integrator.max_step);
    EXPECT_EQ(back.section.I_grid, c.section.I_grid);
    EXPECT_EQ(back.output_dir, c.output_dir);
  }
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "uvstab_config_test.json";
  {
    std::ofstream out(path);
    out << R"({"version": 1, "alpha_e": 3, "params": {"inertia": [1, 2, 3]}})";
  }
  EXPECT_EQ(load_config(path).alpha_e, 3.0);
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_THROW(load_config(path), ConfigError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), ConfigError);
}

TEST(Csv, SeventeenSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-0.25), "-0.25");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
  EXPECT_EQ(format_double(1e-300), "1e-300");
  EXPECT_EQ(format_double(2.0 / 3.0 * 1e-300), "6.6666666666666668e-301");
}

TEST(Csv, HeaderAndRows) {
  std::ostringstream out;
  CsvWriter w(out);
  w.header({"I", "dpsi", "T", "valid"});
  w.field(0.5).field(-1.0).field(6.0).field(1.0);
  w.end_row();
  EXPECT_EQ(out.str(), "I,dpsi,T,valid\n0.5,-1,6,1\n");
}

TEST(Csv, BitExactRoundTrip) {
  std::mt19937_64 rng(61);
  std::vector<double> values{0.0, -0.0, 5e-324, std::numeric_limits<double>::max(), -1.0 / 7.0};
  while (values.size() < 5000) {
    const double v = std::bit_cast<double>(rng());
    if (std::isfinite(v)) values.push_back(v);
  }
  std::stringstream buffer;
  CsvWriter w(buffer);
  w.header({"x", "y"});
  for (double v : values) {
    w.field(v).field(-v);
    w.end_row();
  }
  const NumericTable table = read_numeric_csv(buffer);
  ASSERT_EQ(table.columns, (std::vector<std::string>{"x", "y"}));
  ASSERT_EQ(table.rows.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    ASSERT_EQ(std::bit_cast<std::uint64_t>(table.rows[i][0]), std::bit_cast<std::uint64_t>(values[i]));
    ASSERT_EQ(std::bit_cast<std::uint64_t>(table.rows[i][1]), std::bit_cast<std::uint64_t>(-values[i]));
  }
}
