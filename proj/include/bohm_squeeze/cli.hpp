#pragma once

// Run configuration and the four CLI drivers (density, verify, fock, entropy).
// All emitted numbers use 17 significant digits and files carry no
// timestamps, so identical configs yield byte-identical outputs.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bohm_squeeze/closedform.hpp"
#include "bohm_squeeze/errors.hpp"
#include "bohm_squeeze/fockalg.hpp"
#include "bohm_squeeze/spectral.hpp"
#include "bohm_squeeze/verify.hpp"

namespace bohm_squeeze::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kUsage = 1, kTolerance = 2, kIo = 3 };

struct Tolerances {
  double residual = 1e-4;
  double normalization = 1e-6;
  double variance = 1e-5;  // relative to max(1, expected)
  double factorization = 1e-8;
};

struct VerifySettings {
  std::optional<GridSpec2D> grid;  // default: [-6, 6]^2, 201 x 201
  std::vector<double> times;       // default: RunConfig::times
  double dt = verify::kDefaultDt;
  verify::VSource v_source = verify::VSource::hj_closure;
};

struct FockSettings {
  std::vector<double> nu_values{0.5, 1.0};
  unsigned n_max = 24;
};

struct RunConfig {
  Scenario scenario{1.0, 0.0, TimePolynomial{0.0, 1.0}};
  std::optional<GridSpec2D> grid;  // nullopt = "auto"
  std::vector<double> times;
  std::set<std::string> outputs;
  fs::path out_dir = ".";
  Tolerances tolerances;
  VerifySettings verify;
  FockSettings fock;
  std::vector<double> entropy_nu{0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
};

inline const std::set<std::string>& known_outputs() {
  static const std::set<std::string> k{"density", "bohm_potential", "external_potential", "residuals",
                                       "fock",    "entropy",        "variances"};
  return k;
}

// ---------------------------------------------------------------------------
// Parsing.

namespace detail {

inline TimePolynomial parse_poly(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
    throw config_error(std::string(what) + ": expected {\"coeffs\": [c0, c1, ...]}");
  return TimePolynomial(j["coeffs"].get<std::vector<double>>());
}

inline GridSpec2D parse_grid(const json& j) {
  GridSpec2D g{j.at("x_min").get<double>(), j.at("x_max").get<double>(), j.at("y_min").get<double>(),
               j.at("y_max").get<double>(), j.at("nx").get<std::size_t>(), j.at("ny").get<std::size_t>()};
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  return g;
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
  try {
    const json& sj = j.at("scenario");
    RunConfig cfg;
    cfg.scenario = Scenario{sj.at("m").get<double>(), sj.value("r", 0.0), detail::parse_poly(sj.at("nu"), "nu"),
                            sj.contains("mu") ? detail::parse_poly(sj["mu"], "mu") : TimePolynomial{}};
    if (j.contains("grid")) {
      if (j["grid"].is_string()) {
        if (j["grid"].get<std::string>() != "auto") throw config_error("grid: expected \"auto\" or an object");
      } else {
        cfg.grid = detail::parse_grid(j["grid"]);
      }
    }
    cfg.times = j.value("times", std::vector<double>{});
    for (const auto& o : j.value("outputs", std::vector<std::string>{})) {
      if (!known_outputs().count(o)) throw config_error("outputs: unknown entry '" + o + "'");
      cfg.outputs.insert(o);
    }
    cfg.out_dir = j.value("out_dir", std::string("."));
    if (j.contains("tolerances")) {
      const json& t = j["tolerances"];
      cfg.tolerances.residual = t.value("residual", cfg.tolerances.residual);
      cfg.tolerances.normalization = t.value("normalization", cfg.tolerances.normalization);
      cfg.tolerances.variance = t.value("variance", cfg.tolerances.variance);
      cfg.tolerances.factorization = t.value("factorization", cfg.tolerances.factorization);
    }
    if (j.contains("verify")) {
      const json& v = j["verify"];
      if (v.contains("grid")) cfg.verify.grid = detail::parse_grid(v["grid"]);
      cfg.verify.times = v.value("times", std::vector<double>{});
      cfg.verify.dt = v.value("dt", cfg.verify.dt);
      if (v.contains("v_source")) cfg.verify.v_source = verify::parse_vsource(v["v_source"].get<std::string>());
    }
    if (j.contains("fock")) {
      cfg.fock.nu_values = j["fock"].value("nu_values", cfg.fock.nu_values);
      cfg.fock.n_max = j["fock"].value("n_max", cfg.fock.n_max);
    }
    if (j.contains("entropy")) cfg.entropy_nu = j["entropy"].value("nu_values", cfg.entropy_nu);
    return cfg;
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(std::string("invalid config: ") + e.what());
  }
}

inline RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw config_error("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

// ---------------------------------------------------------------------------
// Output helpers.

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Short time tag for file names: 0.5 -> "0.5", 3 -> "3".
inline std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

inline void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("cannot create directory '" + dir.string() + "': " + ec.message());
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw io_error("write failed for '" + path.string() + "'");
}

inline void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

/// Header `x,y,value`; rows in grid order (x fastest).
inline void write_field_csv(const fs::path& path, const ScalarField2D& f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
  out << "x,y,value\n";
  const auto& g = f.grid;
  std::string line;
  char buf[96];
  for (std::size_t j = 0; j < g.ny; ++j) {
    const double y = g.y(j);
    for (std::size_t i = 0; i < g.nx; ++i) {
      const int n = std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.x(i), y, f(i, j));
      out.write(buf, n);
    }
  }
  out.flush();
  if (!out) throw io_error("write failed for '" + path.string() + "'");
}

/// Reads a CSV produced by write_field_csv back into a field; the grid is
/// recovered from the first and last coordinates.
inline ScalarField2D read_field_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  if (line != "x,y,value") throw io_error("'" + path.string() + "': unexpected header");
  std::vector<double> xs, ys, vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    char* end = nullptr;
    const double x = std::strtod(line.c_str(), &end);
    const double y = std::strtod(end + 1, &end);
    const double v = std::strtod(end + 1, &end);
    xs.push_back(x);
    ys.push_back(y);
    vs.push_back(v);
  }
  if (xs.size() < 9) throw io_error("'" + path.string() + "': too few rows");
  std::size_t nx = 1;
  while (nx < ys.size() && ys[nx] == ys[0]) ++nx;
  const std::size_t ny = xs.size() / nx;
  if (nx * ny != xs.size()) throw io_error("'" + path.string() + "': rows do not form a grid");
  GridSpec2D g{xs.front(), xs[nx - 1], ys.front(), ys.back(), nx, ny};
  return ScalarField2D{g, 0.0, std::move(vs)};
}

inline json scenario_json(const Scenario& s) {
  return {{"m", s.m()},
          {"r", s.r()},
          {"nu", {{"coeffs", std::vector<double>(s.nu().coeffs().begin(), s.nu().coeffs().end())}}},
          {"mu", {{"coeffs", std::vector<double>(s.mu().coeffs().begin(), s.mu().coeffs().end())}}}};
}

struct RunResult {
  int exit_code = kOk;
  std::vector<fs::path> files;
};

// ---------------------------------------------------------------------------
// density

inline RunResult run_density(const RunConfig& cfg, std::optional<std::size_t> grid_n = std::nullopt,
                             std::ostream& log = std::cerr) {
  if (cfg.times.empty()) throw config_error("density: 'times' must be non-empty");
  ensure_dir(cfg.out_dir);
  RunResult result;
  json summary = json::array();
  for (double t : cfg.times) {
    GridSpec2D grid;
    json entry = {{"t", t}};
    if (cfg.grid) {
      grid = *cfg.grid;
    } else {
      const AutoGrid ag = auto_grid(cfg.scenario, t);
      grid = ag.grid;
      entry["extent_sigmas"] = ag.extent_sigmas;
      entry["capped"] = ag.capped;
      if (ag.capped)
        log << "warning: t=" << time_tag(t) << ": auto grid capped at " << ag.grid.size()
            << " points; extent covers only " << ag.extent_sigmas << " marginal std devs\n";
    }
    if (grid_n) {
      grid.nx = grid.ny = *grid_n;
      grid.validate();
    }
    const auto rho = sample_density(cfg.scenario, t, grid);
    const fs::path file = cfg.out_dir / ("density_t" + time_tag(t) + ".csv");
    write_field_csv(file, rho);
    result.files.push_back(file);
    entry["file"] = file.filename().string();
    entry["grid"] = verify::to_json(grid);
    entry["mass"] = integrate(rho, [](double v, double, double) { return v; });
    if (cfg.outputs.count("bohm_potential")) {
      const fs::path f = cfg.out_dir / ("bohm_potential_t" + time_tag(t) + ".csv");
      write_field_csv(f, sample_bohm_potential(cfg.scenario, t, grid));
      result.files.push_back(f);
    }
    if (cfg.outputs.count("external_potential")) {
      const fs::path f = cfg.out_dir / ("external_potential_t" + time_tag(t) + ".csv");
      write_field_csv(f, sample_external_potential(cfg.scenario, t, grid));
      result.files.push_back(f);
    }
    summary.push_back(std::move(entry));
  }
  const fs::path sfile = cfg.out_dir / "density_summary.json";
  write_json(sfile, json{{"scenario", scenario_json(cfg.scenario)}, {"slices", summary}});
  result.files.push_back(sfile);
  return result;
}

// ---------------------------------------------------------------------------
// verify

inline GridSpec2D default_verify_grid() { return GridSpec2D::square(6.0, 201); }

inline RunResult run_verify(const RunConfig& cfg, std::optional<std::size_t> grid_n = std::nullopt,
                            std::optional<double> tol = std::nullopt, std::ostream& log = std::cerr) {
  const std::vector<double>& times = cfg.verify.times.empty() ? cfg.times : cfg.verify.times;
  if (times.empty()) throw config_error("verify: 'times' must be non-empty");
  Tolerances tols = cfg.tolerances;
  if (tol) tols.residual = *tol;
  GridSpec2D grid = cfg.verify.grid.value_or(default_verify_grid());
  if (grid_n) {
    grid.nx = grid.ny = *grid_n;
    grid.validate();
  }
  ensure_dir(cfg.out_dir);
  const Scenario& s = cfg.scenario;
  const auto vsrc = cfg.verify.v_source;
  bool passed = true;

  json reports = json::array();
  for (double t : times) {
    for (auto eq : {verify::Equation::schrodinger, verify::Equation::continuity, verify::Equation::hamilton_jacobi,
                    verify::Equation::bohm_definition}) {
      const auto conv = verify::residual_convergence(eq, s, t, grid, cfg.verify.dt, vsrc);
      const bool ok = conv.coarse.max_abs_residual <= tols.residual;
      passed = passed && ok;
      json r = verify::to_json(conv.coarse);
      r["v_source"] = std::string(verify::to_string(vsrc));
      r["refined_max_abs_residual"] = conv.fine.max_abs_residual;
      r["richardson_ratio"] = conv.ratio;
      r["within_tolerance"] = ok;
      if (!ok)
        log << "tolerance: " << verify::to_string(eq) << " t=" << time_tag(t)
            << " max residual " << format_double(conv.coarse.max_abs_residual) << " > " << tols.residual << "\n";
      reports.push_back(std::move(r));
    }
  }

  // Which external potential satisfies the Hamilton-Jacobi equation.
  json consistency = json::array();
  std::vector<verify::VSource> sources{verify::VSource::closed_form, verify::VSource::literal_general};
  if (match_worked_example(s)) sources.push_back(verify::VSource::example_reference);
  for (double t : times)
    for (auto src : sources) {
      const auto r = verify::hamilton_jacobi_residual(s, t, grid, src);
      consistency.push_back({{"t", t},
                             {"v_source", std::string(verify::to_string(src))},
                             {"max_abs_residual", r.max_abs_residual},
                             {"rms_residual", r.rms_residual}});
    }

  json norms = json::array(), vars = json::array();
  for (double t : times) {
    const GridSpec2D ng = auto_grid(s, t).grid;
    const auto n = verify::normalization(s, t, ng);
    const bool ok = std::abs(n.mass - 1.0) <= tols.normalization;
    passed = passed && ok;
    if (!n.boundary_ok()) log << "warning: t=" << time_tag(t) << ": density on grid boundary " << n.boundary_max << "\n";
    if (!ok) log << "tolerance: normalization t=" << time_tag(t) << " mass " << format_double(n.mass) << "\n";
    norms.push_back({{"t", t}, {"mass", n.mass}, {"boundary_max", n.boundary_max}, {"grid", verify::to_json(ng)},
                     {"within_tolerance", ok}});

    const auto q = verify::quadrature_variances(s, t, ng);
    const auto shape = density_shape(s, t);
    const bool vok = std::abs(q.var_plus - shape.var_plus) <= tols.variance * std::max(1.0, shape.var_plus) &&
                     std::abs(q.var_minus - shape.var_minus) <= tols.variance * std::max(1.0, shape.var_minus);
    passed = passed && vok;
    if (!vok) log << "tolerance: variances t=" << time_tag(t) << "\n";
    vars.push_back({{"t", t},
                    {"var_plus", q.var_plus},
                    {"var_minus", q.var_minus},
                    {"expected_var_plus", shape.var_plus},
                    {"expected_var_minus", shape.var_minus},
                    {"product", q.var_plus * q.var_minus},
                    {"within_tolerance", vok}});
  }

  json doc{{"scenario", scenario_json(s)},
           {"v_source", std::string(verify::to_string(vsrc))},
           {"tolerances",
            {{"residual", tols.residual}, {"normalization", tols.normalization}, {"variance", tols.variance}}},
           {"reports", reports},
           {"potential_consistency", consistency},
           {"normalization", norms},
           {"variances", vars},
           {"passed", passed}};
  RunResult result;
  const fs::path file = cfg.out_dir / "residuals.json";
  write_json(file, doc);
  result.files.push_back(file);
  result.exit_code = passed ? kOk : kTolerance;
  return result;
}

// ---------------------------------------------------------------------------
// fock

inline constexpr unsigned kFockMaxNmax = 63;

inline unsigned ode_steps_for(double nu) {
  return std::max(100u, static_cast<unsigned>(std::ceil(std::abs(nu) * 2000.0)));
}

inline RunResult run_fock(const std::vector<double>& nu_values, unsigned n_max, const fs::path& out_dir,
                          double flag_tolerance = 1e-8) {
  if (n_max > kFockMaxNmax) throw config_error("fock: n_max must be <= 63");
  if (nu_values.empty()) throw config_error("fock: nu_values must be non-empty");
  const fock::FockSpaceSpec spec(n_max);
  const unsigned level = spec.interior_level();
  ensure_dir(out_dir);
  json entries = json::array();
  for (double nu : nu_values) {
    json e{{"nu", nu}};
    try {
      const auto direct = fock::two_mode_squeeze_direct(nu, spec);
      const auto factored = fock::two_mode_squeeze_factored(nu, spec);
      const double dist = fock::factorization_distance(direct, factored, level);
      const double vac = fock::vacuum_column_error(direct, nu, level);
      e["factorization_distance"] = dist;
      e["unitarity_defect"] = fock::unitarity_defect(direct, level);
      e["vacuum_column_error"] = vac;
      e["vacuum_offdiagonal_max"] = fock::vacuum_offdiagonal_max(direct);
      const auto ode = fock::disentangle_ode_oracle(nu, ode_steps_for(nu));
      const auto closed = fock::disentangle_closed(nu);
      e["ode"] = {{"f1", ode.f1}, {"f2", ode.f2}, {"f3", ode.f3},
                  {"deviation", std::abs(ode.f1 - closed.f1) + std::abs(ode.f2 - closed.f2) +
                                    std::abs(ode.f3 - closed.f3)}};
      e["truncation_flagged"] = dist > flag_tolerance || vac > flag_tolerance;
    } catch (const std::exception& ex) {
      e["error"] = ex.what();
    }
    entries.push_back(std::move(e));
  }
  RunResult result;
  const fs::path file = out_dir / "fock_report.json";
  write_json(file, json{{"n_max", n_max}, {"interior_level", level}, {"flag_tolerance", flag_tolerance},
                        {"entries", entries}});
  result.files.push_back(file);
  return result;
}

// ---------------------------------------------------------------------------
// entropy

inline RunResult run_entropy(const std::vector<double>& nu_values, const fs::path& out_dir) {
  ensure_dir(out_dir);
  std::ostringstream csv;
  csv << "nu,entropy_sum,entropy_closed,schmidt_lambda0\n";
  for (double nu : nu_values) {
    const auto spec = spectral::schmidt_spectrum(nu, spectral::schmidt_terms_for(nu));
    csv << format_double(nu) << ',' << format_double(spectral::entanglement_entropy(spec)) << ','
        << format_double(spectral::entanglement_entropy_closed(nu)) << ',' << format_double(spec.lambdas.front())
        << '\n';
  }
  RunResult result;
  const fs::path file = out_dir / "entropy.csv";
  write_text(file, csv.str());
  result.files.push_back(file);
  return result;
}

}  // namespace bohm_squeeze::cli
