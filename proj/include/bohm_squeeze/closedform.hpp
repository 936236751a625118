#pragma once

// Closed-form phase, amplitude, wavefunction and potentials of the engineered
// two-mode squeezed vacuum-like state psi = A exp(iS), hbar = 1, with
//
//   S(x, y, t) = m nu'(t) [ r (x^2 + y^2) / 2 + x y ] + mu(t),
//   A(x, y, t) = pi^{-1/2} e^{-r nu} exp{ -e^{-2 r nu} [ (x^2+y^2)/2
//                 + ((x^2+y^2) tanh^2 nu - 2 x y tanh nu) / sech^2 nu ] }.
//
// Both potentials are quadratic and symmetric under x <-> y, so their level
// curves are classified from principal-axis coefficients along
// u = (x + y)/sqrt(2) and v = (x - y)/sqrt(2).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bohm_squeeze/grid.hpp"
#include "bohm_squeeze/timefns.hpp"

namespace bohm_squeeze {

inline constexpr double kMaxAbsNu = 50.0;

/// Full parameter set of the phase ansatz.
class Scenario {
 public:
  Scenario(double m, double r, TimePolynomial nu, TimePolynomial mu = {})
      : m_(m), r_(r), nu_(std::move(nu)), mu_(std::move(mu)) {
    if (!(m_ > 0.0) || !std::isfinite(m_)) throw std::invalid_argument("Scenario: mass must be positive and finite");
    if (!std::isfinite(r_)) throw std::invalid_argument("Scenario: r must be finite");
    if (nu_.constant_term() != 0.0) throw std::invalid_argument("Scenario: nu(0) must vanish");
  }

  double m() const { return m_; }
  double r() const { return r_; }
  const TimePolynomial& nu() const { return nu_; }
  const TimePolynomial& mu() const { return mu_; }

  /// nu(t), range-checked against kMaxAbsNu (cosh(4 nu) overflows near 177).
  double nu_at(double t) const {
    const double v = nu_.eval(t);
    if (!(std::abs(v) <= kMaxAbsNu))
      throw std::out_of_range("Scenario: |nu(t)| = " + std::to_string(std::abs(v)) + " exceeds supported bound 50");
    return v;
  }

 private:
  double m_;
  double r_;
  TimePolynomial nu_;
  TimePolynomial mu_;
};

// ---------------------------------------------------------------------------
// Phase and its analytic derivatives (S is quadratic in x, y).

inline double phase_S(const Scenario& s, double x, double y, double t) {
  return s.m() * s.nu().eval_d1(t) * (s.r() * (x * x + y * y) / 2.0 + x * y) + s.mu().eval(t);
}

struct PhaseGradient {
  double sx;
  double sy;
};

inline PhaseGradient phase_gradient(const Scenario& s, double x, double y, double t) {
  const double a = s.m() * s.nu().eval_d1(t);
  return {a * (s.r() * x + y), a * (s.r() * y + x)};
}

/// S_xx + S_yy; constant in space.
inline double phase_laplacian(const Scenario& s, double t) { return 2.0 * s.m() * s.nu().eval_d1(t) * s.r(); }

inline double phase_dt(const Scenario& s, double x, double y, double t) {
  return s.m() * s.nu().eval_d2(t) * (s.r() * (x * x + y * y) / 2.0 + x * y) + s.mu().eval_d1(t);
}

// ---------------------------------------------------------------------------
// Amplitude and wavefunction.

inline double amplitude_A(const Scenario& s, double x, double y, double t) {
  const double nu = s.nu_at(t);
  const double rho2 = x * x + y * y;
  const double sh = std::sinh(nu);
  const double ch = std::cosh(nu);
  // ((rho2 tanh^2 - 2xy tanh) / sech^2) == rho2 sinh^2 - 2xy sinh cosh
  const double bracket = rho2 / 2.0 + (rho2 * sh * sh - 2.0 * x * y * sh * ch);
  const double contraction = std::exp(-2.0 * s.r() * nu);
  return std::exp(-s.r() * nu - contraction * bracket) / std::sqrt(std::numbers::pi);
}

inline std::complex<double> wavefunction_psi(const Scenario& s, double x, double y, double t) {
  return std::polar(amplitude_A(s, x, y, t), phase_S(s, x, y, t));
}

// ---------------------------------------------------------------------------
// Potentials.

inline double bohm_potential(const Scenario& s, double x, double y, double t) {
  const double nu = s.nu_at(t);
  const double r = s.r();
  const double e4 = std::exp(-4.0 * nu * r);
  const double e2 = std::exp(-2.0 * nu * r);
  return -1.0 / (2.0 * s.m()) *
         ((x * x + y * y) * std::cosh(4.0 * nu) * e4 - 2.0 * x * y * std::sinh(4.0 * nu) * e4 -
          2.0 * std::cosh(2.0 * nu) * e2);
}

/// External potential consistent with the modified Hamilton-Jacobi equation
/// (1/2m)|grad S|^2 + V_B + V + S_t = 0, written out coefficient by coefficient.
inline double external_potential(const Scenario& s, double x, double y, double t) {
  const double nu = s.nu_at(t);
  const double m = s.m();
  const double r = s.r();
  const double nd = s.nu().eval_d1(t);
  const double ndd = s.nu().eval_d2(t);
  const double e4 = std::exp(-4.0 * nu * r);
  const double e2 = std::exp(-2.0 * nu * r);
  const double radial = -m * (r * r + 1.0) * nd * nd - m * r * ndd + std::cosh(4.0 * nu) * e4 / m;
  const double cross = -2.0 * m * r * nd * nd - m * ndd - std::sinh(4.0 * nu) * e4 / m;
  return 0.5 * (x * x + y * y) * radial + x * y * cross - std::cosh(2.0 * nu) * e2 / m - s.mu().eval_d1(t);
}

/// The general external-potential formula in its literal reference form.
/// Its V_B-derived terms disagree with the Hamilton-Jacobi closure (sign and
/// a factor 2m); kept so the discrepancy can be measured.
inline double external_potential_literal(const Scenario& s, double x, double y, double t) {
  const double nu = s.nu_at(t);
  const double m = s.m();
  const double r = s.r();
  const double nd = s.nu().eval_d1(t);
  const double ndd = s.nu().eval_d2(t);
  const double e4 = std::exp(-4.0 * nu * r);
  const double e2 = std::exp(-2.0 * nu * r);
  return 0.5 * (x * x + y * y) * (-m * (r * r + 1.0) * nd * nd - m * r * ndd - 2.0 * std::cosh(4.0 * nu) * e4) +
         x * y * (-2.0 * m * r * nd * nd - m * ndd + 2.0 * std::sinh(4.0 * nu) * e4) +
         2.0 * std::cosh(2.0 * nu) * e2 - s.mu().eval_d1(t);
}

/// V = -S_t - (S_x^2 + S_y^2)/(2m) - V_B, assembled from its parts.
inline double hj_closure_potential(const Scenario& s, double x, double y, double t) {
  const auto g = phase_gradient(s, x, y, t);
  return -phase_dt(s, x, y, t) - (g.sx * g.sx + g.sy * g.sy) / (2.0 * s.m()) - bohm_potential(s, x, y, t);
}

/// The two worked examples whose potentials have a reference closed form.
enum class WorkedExample { linear_schedule, quadratic_schedule };

namespace detail {
inline bool coeffs_equal(const TimePolynomial& p, std::initializer_list<double> want) {
  const auto c = p.coeffs();
  const std::size_t n = std::max(c.size(), want.size());
  for (std::size_t k = 0; k < n; ++k) {
    const double a = k < c.size() ? c[k] : 0.0;
    const double b = k < want.size() ? *(want.begin() + k) : 0.0;
    if (a != b) return false;
  }
  return true;
}
}  // namespace detail

/// (m=1, r=0, nu=t, mu=0) -> linear_schedule; (m=1, r=1, nu=t^2, mu=0) ->
/// quadratic_schedule; anything else -> nullopt.
inline std::optional<WorkedExample> match_worked_example(const Scenario& s) {
  if (s.m() != 1.0 || !detail::coeffs_equal(s.mu(), {0.0})) return std::nullopt;
  if (s.r() == 0.0 && detail::coeffs_equal(s.nu(), {0.0, 1.0})) return WorkedExample::linear_schedule;
  if (s.r() == 1.0 && detail::coeffs_equal(s.nu(), {0.0, 0.0, 1.0})) return WorkedExample::quadratic_schedule;
  return std::nullopt;
}

inline double reference_example_potential(WorkedExample ex, double x, double y, double t) {
  const double rho2 = x * x + y * y;
  if (ex == WorkedExample::linear_schedule) {
    return rho2 / 2.0 * (std::cosh(4.0 * t) - 1.0) - x * y * std::sinh(4.0 * t) - std::cosh(2.0 * t);
  }
  const double t2 = t * t;
  return (-4.0 * t2 + 0.5 * std::exp(-4.0 * t2) * std::cosh(4.0 * t2) - 1.0) * rho2 +
         (-8.0 * t2 - std::exp(-4.0 * t2) * std::sinh(4.0 * t2) - 2.0) * x * y -
         std::exp(-2.0 * t2) * std::cosh(2.0 * t2);
}

// ---------------------------------------------------------------------------
// Level-curve classification.

/// W(x, y) = along * u^2 + across * v^2 + constant with u = (x+y)/sqrt2,
/// v = (x-y)/sqrt2. Each coefficient carries the magnitude of the largest
/// term that produced it, so cancellation to zero can be recognised.
struct SymmetricQuadratic {
  double along = 0.0;
  double across = 0.0;
  double constant = 0.0;
  double along_scale = 0.0;
  double across_scale = 0.0;
  double constant_scale = 0.0;

  double operator()(double x, double y) const {
    const double u = (x + y) / std::numbers::sqrt2;
    const double v = (x - y) / std::numbers::sqrt2;
    return along * u * u + across * v * v + constant;
  }
};

inline SymmetricQuadratic bohm_quadratic_form(const Scenario& s, double t) {
  const double nu = s.nu_at(t);
  const double m = s.m();
  const double r = s.r();
  SymmetricQuadratic q;
  q.along = -std::exp(-4.0 * r * nu - 4.0 * nu) / (2.0 * m);
  q.across = -std::exp(-4.0 * r * nu + 4.0 * nu) / (2.0 * m);
  q.constant = std::exp(-2.0 * r * nu) * std::cosh(2.0 * nu) / m;
  q.along_scale = std::abs(q.along);
  q.across_scale = std::abs(q.across);
  q.constant_scale = std::abs(q.constant);
  return q;
}

inline SymmetricQuadratic external_quadratic_form(const Scenario& s, double t) {
  const double nu = s.nu_at(t);
  const double m = s.m();
  const double r = s.r();
  const double nd = s.nu().eval_d1(t);
  const double ndd = s.nu().eval_d2(t);
  const double kinetic_along = -0.5 * m * (1.0 + r) * (1.0 + r) * nd * nd;
  const double accel_along = -0.5 * m * (1.0 + r) * ndd;
  const double quantum_along = std::exp(-4.0 * r * nu - 4.0 * nu) / (2.0 * m);
  const double kinetic_across = -0.5 * m * (1.0 - r) * (1.0 - r) * nd * nd;
  const double accel_across = 0.5 * m * (1.0 - r) * ndd;
  const double quantum_across = std::exp(-4.0 * r * nu + 4.0 * nu) / (2.0 * m);
  const double quantum_const = -std::exp(-2.0 * r * nu) * std::cosh(2.0 * nu) / m;
  const double mu_dot = s.mu().eval_d1(t);

  SymmetricQuadratic q;
  q.along = kinetic_along + accel_along + quantum_along;
  q.across = kinetic_across + accel_across + quantum_across;
  q.constant = quantum_const - mu_dot;
  q.along_scale = std::max({std::abs(kinetic_along), std::abs(accel_along), std::abs(quantum_along)});
  q.across_scale = std::max({std::abs(kinetic_across), std::abs(accel_across), std::abs(quantum_across)});
  q.constant_scale = std::max(std::abs(quantum_const), std::abs(mu_dot));
  return q;
}

enum class ConicType { ellipse, parabola, hyperbola, degenerate };

inline std::string_view to_string(ConicType c) {
  switch (c) {
    case ConicType::ellipse: return "ellipse";
    case ConicType::parabola: return "parabola";
    case ConicType::hyperbola: return "hyperbola";
    case ConicType::degenerate: return "degenerate";
  }
  return "unknown";
}

struct ConicClass {
  double discriminant = 0.0;  // det of the 3x3 matrix of the conic
  double minor33 = 0.0;       // AC - B^2/4
  ConicType classification = ConicType::degenerate;
};

inline constexpr double kConicZeroTolerance = 1e-12;

/// General conic A x^2 + B xy + C y^2 + D x + E y + F = 0.
struct ConicCoefficients {
  double A = 0.0, B = 0.0, C = 0.0, D = 0.0, E = 0.0, F = 0.0;
};

inline ConicClass classify_conic(const ConicCoefficients& k, double tol = kConicZeroTolerance) {
  const double a = k.A, b = k.B / 2.0, c = k.C, d = k.D / 2.0, e = k.E / 2.0, f = k.F;
  ConicClass out;
  out.minor33 = a * c - b * b;
  out.discriminant = a * (c * f - e * e) - b * (b * f - e * d) + d * (b * e - c * d);
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d), std::abs(e), std::abs(f)});
  const double minor_scale = std::max({a * a, b * b, c * c, std::abs(a * c)});
  const bool minor_zero = std::abs(out.minor33) <= tol * minor_scale;
  const bool det_zero = scale == 0.0 || std::abs(out.discriminant) <= tol * scale * scale * scale;
  if (det_zero) {
    out.classification = ConicType::degenerate;
  } else if (minor_zero) {
    out.classification = ConicType::parabola;
  } else {
    out.classification = out.minor33 > 0.0 ? ConicType::ellipse : ConicType::hyperbola;
  }
  return out;
}

/// Level curve W = level, encoded as the conic (level - W) = 0.
inline ConicClass classify_symmetric(const SymmetricQuadratic& w, double level, double tol = kConicZeroTolerance) {
  ConicClass out;
  const double f = level - w.constant;
  out.minor33 = w.along * w.across;
  out.discriminant = f * w.along * w.across;
  const bool along_zero = std::abs(w.along) <= tol * w.along_scale;
  const bool across_zero = std::abs(w.across) <= tol * w.across_scale;
  const bool f_zero = std::abs(f) <= tol * std::max(std::abs(level), w.constant_scale);
  if (along_zero || across_zero || f_zero) {
    // D = E = 0, so a vanishing quadratic eigenvalue gives parallel lines
    // (or nothing), never a parabola.
    out.classification = ConicType::degenerate;
  } else {
    out.classification = out.minor33 > 0.0 ? ConicType::ellipse : ConicType::hyperbola;
  }
  return out;
}

/// Level curves of V_B at level 0; every valid scenario yields an ellipse.
inline ConicClass classify_level_curves_bohm(const Scenario& s, double t) {
  return classify_symmetric(bohm_quadratic_form(s, t), 0.0);
}

inline ConicClass classify_level_curves_external(const Scenario& s, double t, double level) {
  return classify_symmetric(external_quadratic_form(s, t), level);
}

// ---------------------------------------------------------------------------
// Shape of |psi|^2 and adaptive sampling grids.

/// Second moments of |psi|^2 along the diagonal modes, plus the marginal
/// width in x (or y) and the width of an x-slice at fixed y.
struct DensityShape {
  double var_plus;          // variance of (x+y)/sqrt2
  double var_minus;         // variance of (x-y)/sqrt2
  double marginal_std;      // std of x (= std of y)
  double conditional_std;   // std of x at fixed y
};

inline DensityShape density_shape(const Scenario& s, double t) {
  const double nu = s.nu_at(t);
  const double r = s.r();
  DensityShape d;
  d.var_plus = std::exp(2.0 * nu * (1.0 + r)) / 2.0;
  d.var_minus = std::exp(2.0 * nu * (r - 1.0)) / 2.0;
  d.marginal_std = std::sqrt((d.var_plus + d.var_minus) / 2.0);
  d.conditional_std = 1.0 / std::sqrt(2.0 * std::exp(-2.0 * r * nu) * std::cosh(2.0 * nu));
  return d;
}

struct AutoGridPolicy {
  double extent_sigmas = 7.0;       // half-width in marginal standard deviations
  double spacing_fraction = 0.5;    // fine spacing as a fraction of conditional_std
  std::size_t min_samples = 201;
  std::size_t isotropic_max = 501;  // per-axis limit for square sampling
  std::size_t max_points = std::size_t{1} << 20;
};

struct AutoGrid {
  GridSpec2D grid;
  double extent_sigmas;  // achieved half-width / marginal_std
  bool capped;           // extent reduced to respect max_points
};

namespace detail {
inline std::size_t odd_at_least(double v) {
  auto n = static_cast<std::size_t>(std::ceil(v));
  if (n % 2 == 0) ++n;
  return std::max<std::size_t>(n, 3);
}
inline std::size_t odd_at_most(double v) {
  auto n = static_cast<std::size_t>(std::floor(v));
  if (n % 2 == 0) --n;
  return std::max<std::size_t>(n, 3);
}
}  // namespace detail

/// Square extent covering policy.extent_sigmas marginal deviations. Sampling
/// is isotropic while it fits in isotropic_max per axis; otherwise x keeps the
/// fine spacing (each row crosses the diagonal ridge once) and y rows are
/// thinned to what the smooth marginal needs.
inline AutoGrid auto_grid(const Scenario& s, double t, const AutoGridPolicy& policy = {}) {
  const DensityShape d = density_shape(s, t);
  const double h = policy.spacing_fraction * d.conditional_std;
  double half = policy.extent_sigmas * d.marginal_std;
  std::size_t nx = std::max(detail::odd_at_least(2.0 * half / h + 1.0), detail::odd_at_least(policy.min_samples));
  std::size_t ny = nx;
  bool capped = false;
  if (nx > policy.isotropic_max) {
    auto coarse_rows = [&](double hw) {
      return detail::odd_at_least(2.0 * hw / (policy.spacing_fraction * d.marginal_std) + 1.0);
    };
    std::size_t rows_min = coarse_rows(half);
    if (nx * rows_min > policy.max_points) {
      nx = detail::odd_at_most(static_cast<double>(policy.max_points) / static_cast<double>(rows_min));
      half = static_cast<double>(nx - 1) / 2.0 * h;
      rows_min = coarse_rows(half);
      capped = true;
    }
    const double target = static_cast<double>(policy.isotropic_max * policy.isotropic_max);
    ny = std::max(rows_min, detail::odd_at_most(target / static_cast<double>(nx)));
    ny = std::min({ny, nx, detail::odd_at_most(static_cast<double>(policy.max_points) / static_cast<double>(nx))});
    ny = std::max(ny, rows_min);
  }
  AutoGrid out{GridSpec2D{-half, half, -half, half, nx, ny}, half / d.marginal_std, capped};
  out.grid.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Field sampling.

inline ScalarField2D sample_amplitude(const Scenario& s, double t, const GridSpec2D& g) {
  return sample_field<double>(g, t, [&](double x, double y) { return amplitude_A(s, x, y, t); });
}

inline ScalarField2D sample_density(const Scenario& s, double t, const GridSpec2D& g) {
  return sample_field<double>(g, t, [&](double x, double y) {
    const double a = amplitude_A(s, x, y, t);
    return a * a;
  });
}

inline ComplexField2D sample_wavefunction(const Scenario& s, double t, const GridSpec2D& g) {
  return sample_field<std::complex<double>>(g, t, [&](double x, double y) { return wavefunction_psi(s, x, y, t); });
}

inline ScalarField2D sample_bohm_potential(const Scenario& s, double t, const GridSpec2D& g) {
  return sample_field<double>(g, t, [&](double x, double y) { return bohm_potential(s, x, y, t); });
}

inline ScalarField2D sample_external_potential(const Scenario& s, double t, const GridSpec2D& g) {
  return sample_field<double>(g, t, [&](double x, double y) { return external_potential(s, x, y, t); });
}

}  // namespace bohm_squeeze
