#pragma once

// Finite-difference checks that (A, S, V_B, V) satisfy the Schroedinger,
// continuity, Hamilton-Jacobi and Bohm-potential equations on a grid.
// Time derivatives are central differences of the closed forms; space
// derivatives are second-order central stencils with the grid spacing.
// Statistics exclude a boundary ring of kBoundaryRing samples.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bohm_squeeze/closedform.hpp"
#include "bohm_squeeze/grid.hpp"

namespace bohm_squeeze::verify {

inline constexpr std::size_t kBoundaryRing = 2;
inline constexpr double kDefaultDt = 1e-4;

enum class Equation { schrodinger, continuity, hamilton_jacobi, bohm_definition };

inline std::string_view to_string(Equation e) {
  switch (e) {
    case Equation::schrodinger: return "schrodinger";
    case Equation::continuity: return "continuity";
    case Equation::hamilton_jacobi: return "hamilton_jacobi";
    case Equation::bohm_definition: return "bohm_definition";
  }
  return "unknown";
}

/// Where the external potential comes from.
enum class VSource {
  literal_general,    // literal general formula (config name "eq21")
  hj_closure,         // -S_t - |grad S|^2 / 2m - V_B
  example_reference,  // reference potential of a worked example ("example_printed")
  closed_form,        // external_potential()
};

inline std::string_view to_string(VSource v) {
  switch (v) {
    case VSource::literal_general: return "eq21";
    case VSource::hj_closure: return "hj_closure";
    case VSource::example_reference: return "example_printed";
    case VSource::closed_form: return "closed_form";
  }
  return "unknown";
}

inline VSource parse_vsource(std::string_view name) {
  if (name == "eq21") return VSource::literal_general;
  if (name == "hj_closure") return VSource::hj_closure;
  if (name == "example_printed") return VSource::example_reference;
  if (name == "closed_form") return VSource::closed_form;
  throw std::invalid_argument("unknown v_source '" + std::string(name) + "'");
}

using PotentialFn = std::function<double(double, double, double)>;

inline PotentialFn external_potential_from(const Scenario& s, VSource src) {
  switch (src) {
    case VSource::literal_general:
      return [s](double x, double y, double t) { return external_potential_literal(s, x, y, t); };
    case VSource::hj_closure:
      return [s](double x, double y, double t) { return hj_closure_potential(s, x, y, t); };
    case VSource::closed_form:
      return [s](double x, double y, double t) { return external_potential(s, x, y, t); };
    case VSource::example_reference: {
      const auto ex = match_worked_example(s);
      if (!ex) throw std::invalid_argument("v_source example_printed needs one of the two worked-example scenarios");
      return [ex = *ex](double x, double y, double t) { return reference_example_potential(ex, x, y, t); };
    }
  }
  throw std::invalid_argument("unknown v_source");
}

struct ResidualReport {
  Equation equation = Equation::schrodinger;
  double t = 0.0;
  double max_abs_residual = 0.0;
  double rms_residual = 0.0;
  GridSpec2D grid;  // interior extent the statistics cover
  double dt = 0.0;
};

inline nlohmann::ordered_json to_json(const GridSpec2D& g) {
  return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min},
          {"y_max", g.y_max}, {"nx", g.nx},       {"ny", g.ny}};
}

inline nlohmann::ordered_json to_json(const ResidualReport& r) {
  return {{"equation", std::string(to_string(r.equation))},
          {"t", r.t},
          {"max_abs_residual", r.max_abs_residual},
          {"rms_residual", r.rms_residual},
          {"grid", to_json(r.grid)},
          {"dt", r.dt}};
}

namespace detail {

/// Reduces |residual(i, j)| over the interior; per-row partials are combined in
/// fixed order.
template <typename F>
ResidualReport reduce_interior(Equation eq, double t, double dt, const GridSpec2D& grid, F&& residual) {
  if (grid.nx < 2 * kBoundaryRing + 1 || grid.ny < 2 * kBoundaryRing + 1)
    throw std::invalid_argument("residual: grid too small for the boundary ring");
  const std::size_t i0 = kBoundaryRing, i1 = grid.nx - kBoundaryRing;
  const std::size_t j0 = kBoundaryRing, j1 = grid.ny - kBoundaryRing;
  std::vector<double> row_max(grid.ny, 0.0), row_sq(grid.ny, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t jj = static_cast<std::ptrdiff_t>(j0); jj < static_cast<std::ptrdiff_t>(j1); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    double mx = 0.0, sq = 0.0;
    for (std::size_t i = i0; i < i1; ++i) {
      const double r = residual(i, j);
      mx = std::max(mx, r);
      sq += r * r;
    }
    row_max[j] = mx;
    row_sq[j] = sq;
  }
  double mx = 0.0, sq = 0.0;
  for (std::size_t j = j0; j < j1; ++j) {
    mx = std::max(mx, row_max[j]);
    sq += row_sq[j];
  }
  const double count = static_cast<double>((i1 - i0) * (j1 - j0));
  return {eq, t, mx, std::sqrt(sq / count), grid.shrunk(kBoundaryRing), dt};
}

template <typename T>
T laplacian(const Field2D<T>& f, std::size_t i, std::size_t j, double hx2, double hy2) {
  return (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / hx2 + (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / hy2;
}

}  // namespace detail

/// V_B = -(1/2m) lap(A) / A on the grid minus its outer ring.
inline ScalarField2D bohm_from_amplitude(const ScalarField2D& field_a, double m) {
  const GridSpec2D& g = field_a.grid;
  if (g.nx < 5 || g.ny < 5) throw std::invalid_argument("bohm_from_amplitude: need at least 5 samples per axis");
  if (!(m > 0.0)) throw std::invalid_argument("bohm_from_amplitude: mass must be positive");
  for (double a : field_a.values)
    if (!(a >= 1e-300)) throw std::domain_error("bohm_from_amplitude: amplitude below 1e-300; cannot divide");
  const double hx2 = g.dx() * g.dx(), hy2 = g.dy() * g.dy();
  ScalarField2D out{g.shrunk(1), field_a.t, std::vector<double>((g.nx - 2) * (g.ny - 2))};
  for (std::size_t j = 1; j + 1 < g.ny; ++j)
    for (std::size_t i = 1; i + 1 < g.nx; ++i)
      out(i - 1, j - 1) = -detail::laplacian(field_a, i, j, hx2, hy2) / (2.0 * m * field_a(i, j));
  return out;
}

inline ResidualReport continuity_residual(const Scenario& s, double t, const GridSpec2D& grid, double dt = kDefaultDt) {
  if (!(dt > 0.0)) throw std::invalid_argument("continuity_residual: dt must be positive");
  const auto a = sample_amplitude(s, t, grid);
  const auto ap = sample_amplitude(s, t + dt, grid);
  const auto am = sample_amplitude(s, t - dt, grid);
  const double hx = grid.dx(), hy = grid.dy();
  const double div_term = phase_laplacian(s, t) / (2.0 * s.m());
  return detail::reduce_interior(Equation::continuity, t, dt, grid, [&](std::size_t i, std::size_t j) {
    const double at = (ap(i, j) - am(i, j)) / (2.0 * dt);
    const double ax = (a(i + 1, j) - a(i - 1, j)) / (2.0 * hx);
    const double ay = (a(i, j + 1) - a(i, j - 1)) / (2.0 * hy);
    const auto gs = phase_gradient(s, grid.x(i), grid.y(j), t);
    return std::abs(at + (gs.sx * ax + gs.sy * ay) / s.m() + div_term * a(i, j));
  });
}

inline ResidualReport hamilton_jacobi_residual(const Scenario& s, double t, const GridSpec2D& grid,
                                               VSource v_source = VSource::closed_form) {
  grid.validate();
  const auto v = external_potential_from(s, v_source);
  return detail::reduce_interior(Equation::hamilton_jacobi, t, 0.0, grid, [&](std::size_t i, std::size_t j) {
    const double x = grid.x(i), y = grid.y(j);
    const auto gs = phase_gradient(s, x, y, t);
    return std::abs((gs.sx * gs.sx + gs.sy * gs.sy) / (2.0 * s.m()) + bohm_potential(s, x, y, t) + v(x, y, t) +
                    phase_dt(s, x, y, t));
  });
}

inline ResidualReport schrodinger_residual(const Scenario& s, double t, const GridSpec2D& grid, double dt = kDefaultDt,
                                           VSource v_source = VSource::hj_closure) {
  if (!(dt > 0.0)) throw std::invalid_argument("schrodinger_residual: dt must be positive");
  const auto v = external_potential_from(s, v_source);
  const auto psi = sample_wavefunction(s, t, grid);
  const auto pp = sample_wavefunction(s, t + dt, grid);
  const auto pm = sample_wavefunction(s, t - dt, grid);
  const double hx2 = grid.dx() * grid.dx(), hy2 = grid.dy() * grid.dy();
  const std::complex<double> i_unit{0.0, 1.0};
  return detail::reduce_interior(Equation::schrodinger, t, dt, grid, [&](std::size_t i, std::size_t j) {
    const std::complex<double> dpsi = (pp(i, j) - pm(i, j)) / (2.0 * dt);
    const std::complex<double> lap = detail::laplacian(psi, i, j, hx2, hy2);
    return std::abs(i_unit * dpsi + lap / (2.0 * s.m()) - v(grid.x(i), grid.y(j), t) * psi(i, j));
  });
}

/// lap_h(A) + 2 m A V_B, i.e. the Bohm-potential definition multiplied through
/// by -2 m A so that no division by the decaying amplitude occurs.
inline ResidualReport bohm_definition_residual(const Scenario& s, double t, const GridSpec2D& grid) {
  const auto a = sample_amplitude(s, t, grid);
  const double hx2 = grid.dx() * grid.dx(), hy2 = grid.dy() * grid.dy();
  return detail::reduce_interior(Equation::bohm_definition, t, 0.0, grid, [&](std::size_t i, std::size_t j) {
    return std::abs(detail::laplacian(a, i, j, hx2, hy2) + 2.0 * s.m() * a(i, j) * bohm_potential(s, grid.x(i), grid.y(j), t));
  });
}

inline ResidualReport residual(Equation eq, const Scenario& s, double t, const GridSpec2D& grid, double dt,
                               VSource v_source) {
  switch (eq) {
    case Equation::schrodinger: return schrodinger_residual(s, t, grid, dt, v_source);
    case Equation::continuity: return continuity_residual(s, t, grid, dt);
    case Equation::hamilton_jacobi: return hamilton_jacobi_residual(s, t, grid, v_source);
    case Equation::bohm_definition: return bohm_definition_residual(s, t, grid);
  }
  throw std::invalid_argument("unknown equation");
}

/// Residual at grid and at grid.refined(); ratio = coarse / fine max residual,
/// NaN when the fine residual vanishes exactly.
struct ConvergenceCheck {
  ResidualReport coarse;
  ResidualReport fine;
  double ratio;
};

inline ConvergenceCheck residual_convergence(Equation eq, const Scenario& s, double t, const GridSpec2D& grid,
                                             double dt, VSource v_source) {
  auto coarse = residual(eq, s, t, grid, dt, v_source);
  auto fine = residual(eq, s, t, grid.refined(), dt, v_source);
  const double ratio = fine.max_abs_residual > 0.0 ? coarse.max_abs_residual / fine.max_abs_residual
                                                   : std::numeric_limits<double>::quiet_NaN();
  return {coarse, fine, ratio};
}

// ---------------------------------------------------------------------------
// Moments of |psi|^2.

inline constexpr double kBoundaryWarnLevel = 1e-10;

struct NormalizationResult {
  double mass = 0.0;
  double boundary_max = 0.0;  // largest |psi|^2 on the outer edge
  bool boundary_ok() const { return boundary_max <= kBoundaryWarnLevel; }
};

inline double boundary_max(const ScalarField2D& f) {
  const auto& g = f.grid;
  double mx = 0.0;
  for (std::size_t i = 0; i < g.nx; ++i) mx = std::max({mx, f(i, 0), f(i, g.ny - 1)});
  for (std::size_t j = 0; j < g.ny; ++j) mx = std::max({mx, f(0, j), f(g.nx - 1, j)});
  return mx;
}

/// Simpson integral of A^2 over the grid.
inline NormalizationResult normalization(const Scenario& s, double t, const GridSpec2D& grid) {
  const auto rho = sample_density(s, t, grid);
  return {integrate(rho, [](double v, double, double) { return v; }), boundary_max(rho)};
}

struct QuadratureVariances {
  double var_plus = 0.0;   // variance of (x + y)/sqrt2
  double var_minus = 0.0;  // variance of (x - y)/sqrt2
  double mass = 0.0;
};

inline QuadratureVariances quadrature_variances(const Scenario& s, double t, const GridSpec2D& grid) {
  const auto rho = sample_density(s, t, grid);
  const double mass = integrate(rho, [](double v, double, double) { return v; });
  const double inv = 1.0 / std::numbers::sqrt2;
  const double mean_p = integrate(rho, [&](double v, double x, double y) { return v * (x + y) * inv; }) / mass;
  const double mean_m = integrate(rho, [&](double v, double x, double y) { return v * (x - y) * inv; }) / mass;
  const double m2_p = integrate(rho, [&](double v, double x, double y) {
                        const double u = (x + y) * inv;
                        return v * u * u;
                      }) / mass;
  const double m2_m = integrate(rho, [&](double v, double x, double y) {
                        const double w = (x - y) * inv;
                        return v * w * w;
                      }) / mass;
  return {m2_p - mean_p * mean_p, m2_m - mean_m * mean_m, mass};
}

}  // namespace bohm_squeeze::verify
