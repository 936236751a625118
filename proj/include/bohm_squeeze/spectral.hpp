#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bohm_squeeze/errors.hpp"

namespace bohm_squeeze::spectral {

inline constexpr unsigned kHermiteMaxOrder = 512;
inline constexpr unsigned kDefaultSeriesTerms = 60;

namespace detail {
inline void check_order(unsigned n, unsigned n_max) {
  if (n > n_max)
    throw std::out_of_range("hermite_phi: order " + std::to_string(n) + " exceeds limit " + std::to_string(n_max));
}
}  // namespace detail

/// Normalised Hermite functions phi_0..phi_n at eta, via the three-term
/// recurrence on the normalised functions (no factorials are formed).
inline std::vector<double> hermite_phi_all(unsigned n, double eta, unsigned n_max = kHermiteMaxOrder) {
  detail::check_order(n, n_max);
  std::vector<double> phi(n + 1);
  phi[0] = std::exp(-eta * eta / 2.0) / std::sqrt(std::sqrt(std::numbers::pi));
  if (n >= 1) phi[1] = std::numbers::sqrt2 * eta * phi[0];
  for (unsigned k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    phi[k + 1] = eta * std::sqrt(2.0 / (kk + 1.0)) * phi[k] - std::sqrt(kk / (kk + 1.0)) * phi[k - 1];
  }
  return phi;
}

inline double hermite_phi(unsigned n, double eta, unsigned n_max = kHermiteMaxOrder) {
  return hermite_phi_all(n, eta, n_max)[n];
}

/// Partial sum (1/cosh nu) sum_{n=0}^{N} tanh^n(nu) phi_n(x) phi_n(y).
inline double series_amplitude_r0(double x, double y, double nu, unsigned N) {
  const auto px = hermite_phi_all(N, x);
  const auto py = hermite_phi_all(N, y);
  const double rho = std::tanh(nu);
  double sum = 0.0;
  double w = 1.0;
  for (unsigned n = 0; n <= N; ++n) {
    sum += w * px[n] * py[n];
    w *= rho;
  }
  return sum / std::cosh(nu);
}

/// Mehler kernel in the phi basis, scaled by sqrt(1 - rho^2) so that it is the
/// limit of series_amplitude_r0 at rho = tanh nu.
inline double mehler_closed(double x, double y, double rho) {
  if (!(std::abs(rho) < 1.0)) throw std::domain_error("mehler_closed: |rho| must be < 1");
  const double rho2 = x * x + y * y;
  const double exponent = -rho2 / 2.0 - (rho * rho * rho2 - 2.0 * rho * x * y) / (1.0 - rho * rho);
  return std::exp(exponent) / std::sqrt(std::numbers::pi);
}

/// Squared Schmidt coefficients of the r = 0 state (a geometric law).
struct SchmidtSpectrum {
  double nu = 0.0;
  std::vector<double> lambdas;
  double tail_mass = 0.0;
};

inline SchmidtSpectrum schmidt_spectrum(double nu, unsigned N) {
  if (N < 1) throw std::invalid_argument("schmidt_spectrum: need at least one term");
  const double rho = std::tanh(nu);
  const double q = rho * rho;
  const double sech2 = 1.0 / (std::cosh(nu) * std::cosh(nu));
  SchmidtSpectrum out{nu, std::vector<double>(N), 0.0};
  double qn = 1.0;
  for (unsigned n = 0; n < N; ++n) {
    out.lambdas[n] = sech2 * qn;
    qn *= q;
  }
  out.tail_mass = qn;
  return out;
}

/// Smallest N with tanh^{2N}(nu) below tail_target.
inline unsigned schmidt_terms_for(double nu, double tail_target = 1e-13) {
  const double q = std::tanh(nu) * std::tanh(nu);
  if (q == 0.0) return 1;
  const double n = std::ceil(std::log(tail_target) / std::log(q));
  return static_cast<unsigned>(std::max(1.0, n));
}

inline constexpr double kEntropyTailLimit = 1e-12;

/// von Neumann entropy of the reduced state in nats, by direct summation.
inline double entanglement_entropy(const SchmidtSpectrum& spec) {
  if (!(spec.tail_mass < kEntropyTailLimit))
    throw precision_error("entanglement_entropy: tail mass " + std::to_string(spec.tail_mass) +
                          " too large; retain more Schmidt terms");
  double h = 0.0;
  for (double l : spec.lambdas) {
    if (l > 0.0) h -= l * std::log(l);
  }
  return h;
}

/// cosh^2 ln cosh^2 - sinh^2 ln sinh^2.
inline double entanglement_entropy_closed(double nu) {
  const double c2 = std::cosh(nu) * std::cosh(nu);
  const double s2 = std::sinh(nu) * std::sinh(nu);
  const double tail = s2 > 0.0 ? s2 * std::log(s2) : 0.0;
  return c2 * std::log(c2) - tail;
}

}  // namespace bohm_squeeze::spectral
