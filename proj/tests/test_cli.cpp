#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "cli_support.hpp"

using namespace cli_support;
namespace cli = bohm_squeeze::cli;

namespace {

nlohmann::json base_config(const fs::path& out) {
  nlohmann::json j = read_json(source_path("scenarios/fig1.json"));
  j["out_dir"] = out.string();
  return j;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Config, ParsesScenarioFiles) {
  const auto cfg = cli::load_config(source_path("scenarios/fig2.json"));
  EXPECT_EQ(cfg.scenario.r(), 1.0);
  EXPECT_EQ(cfg.scenario.nu(), bohm_squeeze::TimePolynomial({0, 0, 1}));
  EXPECT_FALSE(cfg.grid.has_value());
  EXPECT_EQ(cfg.times.size(), 4u);
  EXPECT_EQ(cfg.verify.v_source, bohm_squeeze::verify::VSource::hj_closure);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(cli::parse_config(nlohmann::json::parse(R"({"scenario": {"m": 1}})")), bohm_squeeze::config_error);
  EXPECT_THROW(cli::parse_config(nlohmann::json::parse(
                   R"({"scenario": {"m": 1, "nu": {"coeffs": [0, 1]}}, "outputs": ["pictures"]})")),
               bohm_squeeze::config_error);
  EXPECT_THROW(cli::parse_config(nlohmann::json::parse(
                   R"({"scenario": {"m": 1, "nu": {"coeffs": [0, 1]}}, "grid": "fine"})")),
               bohm_squeeze::config_error);
}

TEST(Density, Fig1Slices) {
  const fs::path out = fresh_dir("cli_fig1");
  ASSERT_EQ(run_tool("density --config \"" + source_path("scenarios/fig1.json").string() + "\" --out \"" +
                     out.string() + "\""),
            0);
  for (const char* t : {"0", "1", "2", "3"}) {
    const auto f = cli::read_field_csv(out / (std::string("density_t") + t + ".csv"));
    for (double v : f.values) ASSERT_TRUE(std::isfinite(v) && v >= 0.0);
    EXPECT_NEAR(grid_mass(f), 1.0, 1e-4) << "t=" << t;
  }
  const auto f0 = cli::read_field_csv(out / "density_t0.csv");
  for (std::size_t k = 0; k < f0.values.size(); k += 97) {
    const double x = f0.grid.x(k % f0.grid.nx), y = f0.grid.y(k / f0.grid.nx);
    EXPECT_NEAR(f0.values[k], std::exp(-(x * x + y * y)) / std::numbers::pi, 1e-15);
  }
  EXPECT_GT(band_mass(cli::read_field_csv(out / "density_t3.csv")), 0.9);
  EXPECT_EQ(slurp(out / "density_t0.csv").substr(0, 10), "x,y,value\n");
}

TEST(Density, Fig2SlicesIntegrateToOne) {
  const fs::path out = fresh_dir("cli_fig2");
  ASSERT_EQ(run_tool("density --config \"" + source_path("scenarios/fig2.json").string() + "\" --out \"" +
                     out.string() + "\""),
            0);
  for (const char* t : {"0", "1", "2", "3"})
    EXPECT_NEAR(grid_mass(cli::read_field_csv(out / (std::string("density_t") + t + ".csv"))), 1.0, 1e-4)
        << "t=" << t;
  const auto summary = read_json(out / "density_summary.json");
  EXPECT_TRUE(summary["slices"][3]["capped"].get<bool>());
}

TEST(Density, ByteIdenticalReruns) {
  const fs::path a = fresh_dir("cli_det_a"), b = fresh_dir("cli_det_b");
  auto cfg = base_config(a);
  cfg["times"] = {0.5, 1.5};
  cfg["outputs"] = {"density", "bohm_potential", "external_potential"};
  write_json(a / "cfg.json", cfg);
  ASSERT_EQ(run_tool("density --config \"" + (a / "cfg.json").string() + "\""), 0);
  ASSERT_EQ(run_tool("density --config \"" + (a / "cfg.json").string() + "\" --out \"" + b.string() + "\""), 0);
  for (const char* f : {"density_t0.5.csv", "density_t1.5.csv", "bohm_potential_t0.5.csv",
                        "external_potential_t1.5.csv", "density_summary.json"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  // The thread count must not change the bits either.
  const fs::path c = fresh_dir("cli_det_c");
  ASSERT_EQ(run_tool("density --config \"" + (a / "cfg.json").string() + "\" --out \"" + c.string() + "\"") , 0);
  setenv("BOHM_SQUEEZE_THREADS", "3", 1);
  const fs::path d = fresh_dir("cli_det_d");
  ASSERT_EQ(run_tool("density --config \"" + (a / "cfg.json").string() + "\" --out \"" + d.string() + "\""), 0);
  unsetenv("BOHM_SQUEEZE_THREADS");
  EXPECT_EQ(slurp(c / "density_summary.json"), slurp(d / "density_summary.json"));
  EXPECT_EQ(slurp(c / "density_t1.5.csv"), slurp(d / "density_t1.5.csv"));
}

TEST(Density, GridOverride) {
  const fs::path out = fresh_dir("cli_gridn");
  auto cfg = base_config(out);
  cfg["times"] = {1.0};
  write_json(out / "cfg.json", cfg);
  ASSERT_EQ(run_tool("density --config \"" + (out / "cfg.json").string() + "\" --grid-n 31"), 0);
  const auto f = cli::read_field_csv(out / "density_t1.csv");
  EXPECT_EQ(f.grid.nx, 31u);
  EXPECT_EQ(f.grid.ny, 31u);
}

TEST(Verify, LinearScheduleWithinDefaults) {
  const fs::path out = fresh_dir("cli_verify1");
  EXPECT_EQ(run_tool("verify --config \"" + source_path("scenarios/fig1.json").string() + "\" --out \"" +
                     out.string() + "\""),
            0);
  const auto r = read_json(out / "residuals.json");
  EXPECT_EQ(r["reports"].size(), 12u);
  EXPECT_EQ(r["normalization"].size(), 3u);
  EXPECT_EQ(r["variances"].size(), 3u);
}

// With residual tolerance relaxed past the discretisation error, the choice of
// external potential alone decides the outcome.
TEST(Verify, PotentialSourceAdjudication) {
  const fs::path out = fresh_dir("cli_verify_src");
  auto cfg = base_config(out);
  cfg["verify"]["v_source"] = "eq21";
  write_json(out / "literal.json", cfg);
  cfg["verify"]["v_source"] = "example_printed";
  write_json(out / "reference.json", cfg);

  EXPECT_EQ(run_tool("verify --config \"" + (out / "literal.json").string() + "\" --tol 0.1"), 2);
  const auto bad = read_json(out / "residuals.json");
  for (const auto& rep : bad["reports"])
    if (rep["equation"] == "hamilton_jacobi") {
      EXPECT_GT(rep["max_abs_residual"].get<double>(), 1.0);
    }

  EXPECT_EQ(run_tool("verify --config \"" + (out / "reference.json").string() + "\" --tol 0.1"), 0);
  const auto good = read_json(out / "residuals.json");
  for (const auto& rep : good["reports"])
    if (rep["equation"] == "hamilton_jacobi") {
      EXPECT_LT(rep["max_abs_residual"].get<double>(), 1e-11);
    }
  bool saw_literal = false;
  for (const auto& c : good["potential_consistency"])
    if (c["v_source"] == "eq21") {
      saw_literal = true;
      EXPECT_GT(c["max_abs_residual"].get<double>(), 1.0);
    }
  EXPECT_TRUE(saw_literal);
}

TEST(Verify, EmptyTimesIsUsageError) {
  const fs::path out = fresh_dir("cli_empty");
  auto cfg = base_config(out);
  cfg["times"] = nlohmann::json::array();
  cfg["verify"].erase("times");
  write_json(out / "cfg.json", cfg);
  EXPECT_EQ(run_tool("verify --config \"" + (out / "cfg.json").string() + "\""), 1);
  EXPECT_EQ(run_tool("density --config \"" + (out / "cfg.json").string() + "\""), 1);
}

TEST(ExitCodes, UsageAndIo) {
  const fs::path out = fresh_dir("cli_codes");
  EXPECT_EQ(run_tool("density --config \"" + (out / "missing.json").string() + "\""), 1);
  EXPECT_EQ(run_tool("unknown-command"), 1);
  EXPECT_EQ(run_tool(""), 1);
  std::ofstream(out / "broken.json") << "{ not json";
  EXPECT_EQ(run_tool("entropy --config \"" + (out / "broken.json").string() + "\""), 1);
  std::ofstream(out / "blocker") << "file";
  write_json(out / "cfg.json", base_config(out / "blocker" / "sub"));
  EXPECT_EQ(run_tool("entropy --config \"" + (out / "cfg.json").string() + "\""), 3);
}

TEST(Fock, ZeroSqueezeDistancesVanish) {
  const fs::path out = fresh_dir("cli_fock0");
  auto cfg = base_config(out);
  cfg["fock"] = {{"nu_values", {0.0}}, {"n_max", 12}};
  write_json(out / "cfg.json", cfg);
  ASSERT_EQ(run_tool("fock --config \"" + (out / "cfg.json").string() + "\""), 0);
  const auto e = read_json(out / "fock_report.json")["entries"][0];
  EXPECT_EQ(e["factorization_distance"].get<double>(), 0.0);
  EXPECT_EQ(e["vacuum_column_error"].get<double>(), 0.0);
  EXPECT_FALSE(e["truncation_flagged"].get<bool>());
}

TEST(Fock, ModerateSqueezingAtNmax24) {
  const fs::path out = fresh_dir("cli_fock1");
  auto cfg = base_config(out);
  cfg["fock"] = {{"nu_values", {0.5, 1.0}}, {"n_max", 24}};
  write_json(out / "cfg.json", cfg);
  ASSERT_EQ(run_tool("fock --config \"" + (out / "cfg.json").string() + "\""), 0);
  const auto report = read_json(out / "fock_report.json");
  for (const auto& e : report["entries"])
    EXPECT_LT(e["factorization_distance"].get<double>(), 1e-8) << e["nu"];
}

TEST(Fock, StrongSqueezingFlaggedNotFailed) {
  const fs::path out = fresh_dir("cli_fock2");
  auto cfg = base_config(out);
  cfg["fock"] = {{"nu_values", {2.0}}, {"n_max", 24}};
  write_json(out / "cfg.json", cfg);
  ASSERT_EQ(run_tool("fock --config \"" + (out / "cfg.json").string() + "\""), 0);
  const auto e = read_json(out / "fock_report.json")["entries"][0];
  EXPECT_TRUE(e["truncation_flagged"].get<bool>());
  EXPECT_GT(e["factorization_distance"].get<double>(), 1e-8);
  EXPECT_LT(e["ode"]["deviation"].get<double>(), 1e-8);

  cfg["fock"]["n_max"] = 64;
  write_json(out / "cfg.json", cfg);
  EXPECT_EQ(run_tool("fock --config \"" + (out / "cfg.json").string() + "\""), 1);
}

TEST(Entropy, Table) {
  const fs::path out = fresh_dir("cli_entropy");
  ASSERT_EQ(run_tool("entropy --config \"" + source_path("scenarios/fig1.json").string() + "\" --out \"" +
                     out.string() + "\""),
            0);
  const auto rows = read_csv(out / "entropy.csv");
  ASSERT_GE(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"nu", "entropy_sum", "entropy_closed", "schmidt_lambda0"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"0", "0", "0", "1"}));
  double prev = -1.0;
  bool saw_one = false;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double nu = std::stod(rows[k][0]), sum = std::stod(rows[k][1]), closed = std::stod(rows[k][2]);
    EXPECT_NEAR(sum, closed, 1e-9);
    EXPECT_GT(sum, prev);
    prev = sum;
    saw_one = saw_one || nu == 1.0;
  }
  EXPECT_TRUE(saw_one);
}
