#pragma once

#include <cmath>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace bohm_squeeze {

/// Real polynomial c0 + c1 t + ... + cd t^d. Used for the squeeze schedule
/// nu(t) and the phase offset mu(t). Immutable after construction.
class TimePolynomial {
 public:
  TimePolynomial() : coeffs_{0.0} {}
  TimePolynomial(std::initializer_list<double> coeffs) : TimePolynomial(std::vector<double>(coeffs)) {}
  explicit TimePolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    for (double c : coeffs_) {
      if (!std::isfinite(c)) throw std::invalid_argument("TimePolynomial: non-finite coefficient");
    }
  }

  std::span<const double> coeffs() const { return coeffs_; }
  std::size_t degree() const { return coeffs_.size() - 1; }
  double constant_term() const { return coeffs_.front(); }

  /// Horner evaluation of the derivative of order `order` (0, 1 or 2, or higher).
  double eval_derivative(double t, unsigned order) const {
    const std::size_t n = coeffs_.size();
    if (order >= n) return 0.0;
    double acc = 0.0;
    for (std::size_t k = n; k-- > order;) {
      double falling = 1.0;  // k (k-1) ... (k-order+1)
      for (unsigned j = 0; j < order; ++j) falling *= static_cast<double>(k - j);
      acc = acc * t + falling * coeffs_[k];
    }
    return acc;
  }

  double eval(double t) const { return eval_derivative(t, 0); }
  double eval_d1(double t) const { return eval_derivative(t, 1); }
  double eval_d2(double t) const { return eval_derivative(t, 2); }

  friend bool operator==(const TimePolynomial&, const TimePolynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

inline double eval(const TimePolynomial& f, double t) { return f.eval(t); }
inline double eval_d1(const TimePolynomial& f, double t) { return f.eval_d1(t); }
inline double eval_d2(const TimePolynomial& f, double t) { return f.eval_d2(t); }

}  // namespace bohm_squeeze
