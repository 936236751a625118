// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed here and not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bohm_squeeze/bohm_squeeze.hpp"
#include "cli_support.hpp"

using namespace bohm_squeeze;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Scenario example1() { return Scenario(1.0, 0.0, TimePolynomial{0, 1}, TimePolynomial{0}); }
Scenario example2() { return Scenario(1.0, 1.0, TimePolynomial{0, 0, 1}, TimePolynomial{0}); }

Outcome factorization_identity() {
  const auto t0 = Clock::now();
  const fock::FockSpaceSpec spec(24);
  double worst = 0.0;
  std::string per_nu;
  for (double nu : {0.1, 0.25, 0.5, 0.75, 1.0}) {
    const double d = fock::factorization_distance(fock::two_mode_squeeze_direct(nu, spec),
                                                  fock::two_mode_squeeze_factored(nu, spec), 12);
    worst = std::max(worst, d);
    per_nu += fmt(" nu=%g:%.2e", nu, d);
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-8 && secs < 30.0, fmt("max distance %.3e (<1e-8),%s; %.2f s (<30)", worst, per_nu.c_str(), secs)};
}

Outcome ode_oracle() {
  const auto t0 = Clock::now();
  const unsigned per_point = 200, points = 20;
  const auto path = fock::disentangle_ode_trajectory(2.0, per_point * (points - 1));
  double worst = 0.0;
  for (unsigned k = 0; k < points; ++k) {
    const double nu = 2.0 * k / (points - 1);
    const auto& f = path[k * per_point];
    const auto c = fock::disentangle_closed(nu);
    worst = std::max({worst, std::abs(f.f1 - c.f1), std::abs(f.f2 - c.f2), std::abs(f.f3 - c.f3)});
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-8 && secs < 1.0, fmt("max |ODE - closed| %.3e (<1e-8) over 20 points; %.3f s (<1)", worst, secs)};
}

Outcome series_mehler_triangle() {
  const auto t0 = Clock::now();
  const Scenario s = example1();
  double worst_series = 0.0, worst_closed = 0.0;
  std::string per_nu;
  for (double nu : {0.25, 0.5, 1.0}) {
    double ws = 0.0, wc = 0.0;
    for (int i = 0; i < 41; ++i)
      for (int j = 0; j < 41; ++j) {
        const double x = -3.0 + 0.15 * i, y = -3.0 + 0.15 * j;
        const double mehler = spectral::mehler_closed(x, y, std::tanh(nu));
        ws = std::max(ws, std::abs(spectral::series_amplitude_r0(x, y, nu, 60) - mehler));
        wc = std::max(wc, std::abs(mehler - amplitude_A(s, x, y, nu)));
      }
    per_nu += fmt(" nu=%g:%.2e/%.2e", nu, ws, wc);
    worst_series = std::max(worst_series, ws);
    worst_closed = std::max(worst_closed, wc);
  }
  const double secs = seconds_since(t0);
  return {worst_series < 1e-10 && worst_closed < 1e-10 && secs < 5.0,
          fmt("max |series-mehler| %.3e, |mehler-A| %.3e (<1e-10),%s; %.2f s (<5)", worst_series, worst_closed,
              per_nu.c_str(), secs)};
}

Outcome vacuum_column() {
  const fock::FockSpaceSpec spec(32);
  double col = 0.0, off = 0.0;
  for (double nu : {0.1, 0.25, 0.5, 0.75, 1.0}) {
    const auto u = fock::two_mode_squeeze_direct(nu, spec);
    col = std::max(col, fock::vacuum_column_error(u, nu, 12));
    off = std::max(off, fock::vacuum_offdiagonal_max(u));
  }
  return {col < 1e-8 && off < 1e-10,
          fmt("n_max=32: max column error %.3e (<1e-8), max off-diagonal %.3e (<1e-10)", col, off)};
}

Outcome pde_residuals() {
  const auto t0 = Clock::now();
  const GridSpec2D grid = GridSpec2D::square(6.0, 201);
  bool ok = true;
  double worst = 0.0, ratio_lo = 1e300, ratio_hi = 0.0, hj_worst = 0.0;
  std::string worst_at;
  for (auto [name, s] : {std::pair{"ex1", example1()}, std::pair{"ex2", example2()}})
    for (double t : {0.25, 0.5, 1.0}) {
      for (auto eq : {verify::Equation::schrodinger, verify::Equation::continuity, verify::Equation::bohm_definition}) {
        const auto c = verify::residual_convergence(eq, s, t, grid, 1e-4, verify::VSource::hj_closure);
        if (c.coarse.max_abs_residual > worst) {
          worst = c.coarse.max_abs_residual;
          worst_at = fmt("%s %s t=%g", std::string(verify::to_string(eq)).c_str(), name, t);
        }
        ratio_lo = std::min(ratio_lo, c.ratio);
        ratio_hi = std::max(ratio_hi, c.ratio);
        ok = ok && c.coarse.max_abs_residual < 1e-4 && c.ratio >= 3.5 && c.ratio <= 4.5;
      }
      const auto hj = verify::residual_convergence(verify::Equation::hamilton_jacobi, s, t, grid, 1e-4,
                                                   verify::VSource::closed_form);
      hj_worst = std::max({hj_worst, hj.coarse.max_abs_residual, hj.fine.max_abs_residual});
      ok = ok && hj.coarse.max_abs_residual < 1e-12 && hj.fine.max_abs_residual < 1e-12;
    }
  const double secs = seconds_since(t0);
  ok = ok && secs < 120.0;
  return {ok, fmt("max residual %.3e at %s (<1e-4); Richardson ratios [%.3f, %.3f] (in [3.5, 4.5]); HJ %.2e; "
                  "%.1f s (<120)",
                  worst, worst_at.c_str(), ratio_lo, ratio_hi, hj_worst, secs)};
}

Outcome norm_and_squeezing() {
  bool ok = true;
  double norm_dev = 0.0, var_dev = 0.0, prod_dev = 0.0;
  for (double t : {0.0, 1.0, 2.0}) {
    for (const Scenario& s : {example1(), example2()}) {
      const double d = std::abs(verify::normalization(s, t, auto_grid(s, t).grid).mass - 1.0);
      norm_dev = std::max(norm_dev, d);
    }
    const auto q = verify::quadrature_variances(example1(), t, auto_grid(example1(), t).grid);
    var_dev = std::max(var_dev, std::abs(q.var_minus - std::exp(-2.0 * t) / 2.0));
    prod_dev = std::max(prod_dev, std::abs(q.var_plus * q.var_minus - 0.25));
  }
  ok = norm_dev <= 1e-6 && var_dev <= 1e-5 && prod_dev <= 1e-6;
  return {ok, fmt("|mass-1| %.3e (<=1e-6), |var_minus - e^{-2t}/2| %.3e (<=1e-5), |product - 1/4| %.3e (<=1e-6)",
                  norm_dev, var_dev, prod_dev)};
}

Outcome conic_classification() {
  std::mt19937_64 rng(20261014);
  std::uniform_real_distribution<double> um(0.5, 2.0), ur(-1.0, 1.0), uc(-1.0, 1.0), ut(0.0, 3.0);
  std::uniform_int_distribution<int> deg(1, 3);
  int ellipses = 0;
  double worst_rel = 0.0;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> nu{0.0};
    for (int d = deg(rng); d > 0; --d) nu.push_back(uc(rng));
    const Scenario s(um(rng), ur(rng), TimePolynomial(nu), TimePolynomial{uc(rng), uc(rng)});
    const double t = ut(rng);
    const auto c = classify_level_curves_bohm(s, t);
    const double v = s.nu_at(t), m = s.m();
    const double reference = -std::exp(-10.0 * s.r() * v) * std::cosh(2.0 * v) / (4.0 * m * m * m);
    worst_rel = std::max(worst_rel, std::abs(c.discriminant - reference) / std::abs(reference));
    if (c.classification == ConicType::ellipse && c.discriminant < 0.0 && c.minor33 > 0.0) ++ellipses;
  }
  return {ellipses == 100 && worst_rel <= 1e-10,
          fmt("%d/100 ellipses with D<0, minor33>0; max relative |D - reference| %.3e (<=1e-10)", ellipses, worst_rel)};
}

Outcome entropy_diagnostics() {
  double worst = 0.0, prev = -1.0;
  bool increasing = true;
  for (int k = 0; k <= 80; ++k) {
    const double nu = 2.0 * k / 80.0;
    const double h = spectral::entanglement_entropy(spectral::schmidt_spectrum(nu, spectral::schmidt_terms_for(nu)));
    worst = std::max(worst, std::abs(h - spectral::entanglement_entropy_closed(nu)));
    increasing = increasing && h > prev;
    prev = h;
  }
  return {worst <= 1e-9 && increasing,
          fmt("max |sum - closed| %.3e (<=1e-9) on 81 points of [0,2]; strictly increasing: %s", worst,
              increasing ? "yes" : "no")};
}

Outcome figure_reproduction() {
  namespace cs = cli_support;
  const auto out = cs::fresh_dir("acceptance_figs");
  for (const char* fig : {"fig1", "fig2"}) {
    const int rc = cs::run_tool("density --config \"" + cs::source_path(std::string("scenarios/") + fig + ".json").string() +
                                "\" --out \"" + (out / fig).string() + "\"");
    if (rc != 0) return {false, fmt("density run for %s exited %d", fig, rc)};
  }
  bool ok = true;
  std::string detail;
  double band1_t3 = 0.0;
  for (const char* t : {"1", "2", "3"}) {
    const auto f1 = cli::read_field_csv(out / "fig1" / (std::string("density_t") + t + ".csv"));
    const auto f2 = cli::read_field_csv(out / "fig2" / (std::string("density_t") + t + ".csv"));
    const double b1 = cs::band_mass(f1), b2 = cs::band_mass(f2);
    if (std::string(t) == "3") band1_t3 = b1;
    ok = ok && b2 < b1;
    detail += fmt(" t=%s: %.4f vs %.4f;", t, b1, b2);
  }
  ok = ok && band1_t3 > 0.9;
  return {ok, fmt("band |x-y|<0.2 mass fig1 vs fig2:%s fig1 at t=3 > 0.9 and fig2 strictly smaller", detail.c_str())};
}

}  // namespace

int main() {
  configure_threads_from_env();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"factorization identity at n_max=24", factorization_identity},
      {"ODE oracle vs closed forms", ode_oracle},
      {"series / Mehler / closed-form triangle", series_mehler_triangle},
      {"vacuum-column law", vacuum_column},
      {"PDE residuals on the master grid", pde_residuals},
      {"norm conservation and squeezing law", norm_and_squeezing},
      {"conic classification of Bohm level curves", conic_classification},
      {"entanglement entropy diagnostics", entropy_diagnostics},
      {"figure reproduction (diagonal band mass)", figure_reproduction},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu: %s - %s: %s\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
