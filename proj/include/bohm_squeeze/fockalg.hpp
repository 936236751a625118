#pragma once

// Truncated two-mode Fock space: basis |n_a, n_b>, n_a major, each mode kept
// up to n_max quanta. Used as a finite oracle for the disentangling identity
//
//   exp[nu (a+b+ - ab)] = exp[f1 a+b+] exp[f2 (a a+ + b+b)] exp[f3 ab],
//   f1 = tanh nu, f2 = -ln cosh nu, f3 = -tanh nu.
//
// Truncation corrupts the top of the ladder; comparisons therefore restrict
// to the interior block n_a, n_b <= n_max / 2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bohm_squeeze/errors.hpp"
#include "bohm_squeeze/expm.hpp"

namespace bohm_squeeze::fock {

inline constexpr std::size_t kDefaultMaxDimension = 4096;

struct FockSpaceSpec {
  unsigned n_max = 1;

  explicit FockSpaceSpec(unsigned n, std::size_t max_dimension = kDefaultMaxDimension) : n_max(n) {
    if (n_max < 1) throw std::invalid_argument("FockSpaceSpec: n_max must be >= 1");
    if (dimension() > max_dimension)
      throw std::invalid_argument("FockSpaceSpec: two-mode dimension " + std::to_string(dimension()) +
                                  " exceeds " + std::to_string(max_dimension));
  }

  std::size_t levels() const { return std::size_t{n_max} + 1; }
  std::size_t dimension() const { return levels() * levels(); }
  std::size_t index(unsigned na, unsigned nb) const { return std::size_t{na} * levels() + nb; }
  unsigned interior_level() const { return n_max / 2; }
};

using ComplexMatrix = Eigen::MatrixXcd;

struct FockOperator {
  FockSpaceSpec spec;
  ComplexMatrix entries;

  FockOperator adjoint() const { return {spec, entries.adjoint()}; }
  friend FockOperator operator*(const FockOperator& l, const FockOperator& r) {
    return {l.spec, l.entries * r.entries};
  }
};

struct LadderPair {
  FockOperator a;
  FockOperator b;
};

/// Single-mode annihilator: <n-1|A|n> = sqrt(n).
inline Eigen::MatrixXd single_mode_annihilator(unsigned n_max) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  for (unsigned n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& l, const Eigen::MatrixXd& r) {
  Eigen::MatrixXd out(l.rows() * r.rows(), l.cols() * r.cols());
  for (Eigen::Index i = 0; i < l.rows(); ++i)
    for (Eigen::Index j = 0; j < l.cols(); ++j) out.block(i * r.rows(), j * r.cols(), r.rows(), r.cols()) = l(i, j) * r;
  return out;
}

/// a = A (x) I, b = I (x) A.
inline LadderPair build_ladder(const FockSpaceSpec& spec) {
  const Eigen::MatrixXd a1 = single_mode_annihilator(spec.n_max);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(spec.levels(), spec.levels());
  return {FockOperator{spec, kron(a1, id).cast<std::complex<double>>()},
          FockOperator{spec, kron(id, a1).cast<std::complex<double>>()}};
}

/// e^M; a purely real M is exponentiated in real arithmetic.
inline FockOperator matrix_exponential(const FockOperator& m) {
  if (m.entries.imag().isZero(0.0)) {
    const Eigen::MatrixXd re = m.entries.real();
    return {m.spec, bohm_squeeze::matrix_exponential(re).cast<std::complex<double>>()};
  }
  return {m.spec, bohm_squeeze::matrix_exponential(m.entries)};
}

/// nu (a+ b+ - a b), real.
inline Eigen::MatrixXd pair_generator(const FockSpaceSpec& spec) {
  const Eigen::MatrixXd a1 = single_mode_annihilator(spec.n_max);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(spec.levels(), spec.levels());
  const Eigen::MatrixXd ab = kron(a1, id) * kron(id, a1);
  return ab.transpose() - ab;
}

inline FockOperator two_mode_squeeze_direct(double nu, const FockSpaceSpec& spec) {
  if (!std::isfinite(nu)) throw std::invalid_argument("two_mode_squeeze_direct: non-finite nu");
  const Eigen::MatrixXd g = nu * pair_generator(spec);
  return {spec, bohm_squeeze::matrix_exponential(g).cast<std::complex<double>>()};
}

/// exp(f a+ b+) from its terminating series:
/// <i+k, j+k| . |i, j> = f^k / k! sqrt((i+1)...(i+k) (j+1)...(j+k)).
inline Eigen::MatrixXd pair_creation_exponential(double f, const FockSpaceSpec& spec) {
  const std::size_t d = spec.dimension();
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(d, d);
  for (unsigned i = 0; i <= spec.n_max; ++i) {
    for (unsigned j = 0; j <= spec.n_max; ++j) {
      double c = 1.0;
      for (unsigned k = 0; i + k <= spec.n_max && j + k <= spec.n_max; ++k) {
        e(spec.index(i + k, j + k), spec.index(i, j)) = c;
        c *= f / static_cast<double>(k + 1) * std::sqrt(static_cast<double>(i + k + 1) * (j + k + 1));
      }
    }
  }
  return e;
}

/// exp(f a b); equals the transpose of pair_creation_exponential(f).
inline Eigen::MatrixXd pair_annihilation_exponential(double f, const FockSpaceSpec& spec) {
  return pair_creation_exponential(f, spec).transpose();
}

/// Closed-form disentangling coefficients.
struct DisentangleFunctions {
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
};

inline DisentangleFunctions disentangle_closed(double nu) {
  return {std::tanh(nu), -std::log(std::cosh(nu)), -std::tanh(nu)};
}

/// e^{f1 a+b+} e^{f2 (a a+ + b+ b)} e^{f3 ab}. The middle operator is
/// a+a + b+b + 1, applied as an exact diagonal.
inline FockOperator disentangled_product(const DisentangleFunctions& f, const FockSpaceSpec& spec) {
  const Eigen::MatrixXd left = pair_creation_exponential(f.f1, spec);
  const Eigen::MatrixXd right = pair_annihilation_exponential(f.f3, spec);
  Eigen::VectorXd middle(spec.dimension());
  for (unsigned i = 0; i <= spec.n_max; ++i)
    for (unsigned j = 0; j <= spec.n_max; ++j) middle(spec.index(i, j)) = std::exp(f.f2 * (i + j + 1.0));
  const Eigen::MatrixXd prod = left * middle.asDiagonal() * right;
  return {spec, prod.cast<std::complex<double>>()};
}

inline FockOperator two_mode_squeeze_factored(double nu, const FockSpaceSpec& spec) {
  if (!std::isfinite(nu)) throw std::invalid_argument("two_mode_squeeze_factored: non-finite nu");
  return disentangled_product(disentangle_closed(nu), spec);
}

// ---------------------------------------------------------------------------
// Interior-block diagnostics.

inline std::vector<Eigen::Index> interior_indices(const FockSpaceSpec& spec, unsigned level) {
  std::vector<Eigen::Index> idx;
  for (unsigned i = 0; i <= level; ++i)
    for (unsigned j = 0; j <= level; ++j) idx.push_back(static_cast<Eigen::Index>(spec.index(i, j)));
  return idx;
}

inline ComplexMatrix interior_block(const ComplexMatrix& m, const FockSpaceSpec& spec, unsigned level) {
  const auto idx = interior_indices(spec, level);
  return m(idx, idx);
}

/// ||(lhs - rhs)_int||_F / ||lhs_int||_F.
inline double factorization_distance(const FockOperator& direct, const FockOperator& factored, unsigned level) {
  const ComplexMatrix d = interior_block(direct.entries, direct.spec, level);
  const ComplexMatrix f = interior_block(factored.entries, factored.spec, level);
  return (d - f).norm() / d.norm();
}

/// ||(U+ U - I)_int||_F.
inline double unitarity_defect(const FockOperator& u, unsigned level) {
  const ComplexMatrix g = u.entries.adjoint() * u.entries;
  const ComplexMatrix blk = interior_block(g, u.spec, level);
  return (blk - ComplexMatrix::Identity(blk.rows(), blk.cols())).norm();
}

/// max_{n <= level} |<n,n|U|0,0> - tanh^n(nu)/cosh(nu)|.
inline double vacuum_column_error(const FockOperator& u, double nu, unsigned level) {
  double worst = 0.0;
  const double rho = std::tanh(nu);
  double expected = 1.0 / std::cosh(nu);
  for (unsigned n = 0; n <= level; ++n) {
    worst = std::max(worst, std::abs(u.entries(static_cast<Eigen::Index>(u.spec.index(n, n)), 0) - expected));
    expected *= rho;
  }
  return worst;
}

/// max_{m != n} |<m,n|U|0,0>|.
inline double vacuum_offdiagonal_max(const FockOperator& u) {
  double worst = 0.0;
  for (unsigned i = 0; i <= u.spec.n_max; ++i)
    for (unsigned j = 0; j <= u.spec.n_max; ++j)
      if (i != j) worst = std::max(worst, std::abs(u.entries(static_cast<Eigen::Index>(u.spec.index(i, j)), 0)));
  return worst;
}

/// ||([a, a+] - I) restricted to n_a < n_max||_max.
inline double commutator_defect(const LadderPair& ladder) {
  const auto& spec = ladder.a.spec;
  const ComplexMatrix c = ladder.a.entries * ladder.a.entries.adjoint() - ladder.a.entries.adjoint() * ladder.a.entries;
  double worst = 0.0;
  for (unsigned i = 0; i < spec.n_max; ++i)
    for (unsigned j = 0; j <= spec.n_max; ++j) {
      const auto k = static_cast<Eigen::Index>(spec.index(i, j));
      for (Eigen::Index col = 0; col < c.cols(); ++col) {
        const std::complex<double> want = (col == k) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(c(k, col) - want));
      }
    }
  return worst;
}

// ---------------------------------------------------------------------------
// ODE oracle for the disentangling coefficients. The implicit system
//   1 = f1' - 2 f1 f2' + f1^2 f3' e^{-2 f2}
//   0 = f2' - f1 f3' e^{-2 f2}
//  -1 = f3' e^{-2 f2}
// is triangular in the derivatives; solved once it reads
//   f3' = -e^{2 f2},  f2' = -f1,  f1' = 1 - f1^2.

namespace detail {
inline DisentangleFunctions rhs(const DisentangleFunctions& f) {
  return {1.0 - f.f1 * f.f1, -f.f1, -std::exp(2.0 * f.f2)};
}
inline DisentangleFunctions axpy(const DisentangleFunctions& y, double h, const DisentangleFunctions& k) {
  return {y.f1 + h * k.f1, y.f2 + h * k.f2, y.f3 + h * k.f3};
}
inline DisentangleFunctions rk4_step(const DisentangleFunctions& y, double h) {
  const auto k1 = rhs(y);
  const auto k2 = rhs(axpy(y, h / 2.0, k1));
  const auto k3 = rhs(axpy(y, h / 2.0, k2));
  const auto k4 = rhs(axpy(y, h, k3));
  return {y.f1 + h / 6.0 * (k1.f1 + 2.0 * k2.f1 + 2.0 * k3.f1 + k4.f1),
          y.f2 + h / 6.0 * (k1.f2 + 2.0 * k2.f2 + 2.0 * k3.f2 + k4.f2),
          y.f3 + h / 6.0 * (k1.f3 + 2.0 * k2.f3 + 2.0 * k3.f3 + k4.f3)};
}
}  // namespace detail

inline constexpr double kOdeLocalTolerance = 1e-12;

/// RK4 trajectory on [0, nu_end] with `steps` steps; element k is the state at
/// nu = k * nu_end / steps. Each step is also taken as two half steps and the
/// step-doubling estimate |y_half - y_full| / 15 must stay below local_tol.
inline std::vector<DisentangleFunctions> disentangle_ode_trajectory(double nu_end, unsigned steps,
                                                                    double local_tol = kOdeLocalTolerance) {
  if (steps < 100) throw std::invalid_argument("disentangle_ode_oracle: need at least 100 steps");
  if (!std::isfinite(nu_end)) throw std::invalid_argument("disentangle_ode_oracle: non-finite nu_end");
  const double h = nu_end / static_cast<double>(steps);
  std::vector<DisentangleFunctions> path;
  path.reserve(steps + 1);
  DisentangleFunctions y{};
  path.push_back(y);
  for (unsigned k = 0; k < steps; ++k) {
    const auto full = detail::rk4_step(y, h);
    const auto half = detail::rk4_step(detail::rk4_step(y, h / 2.0), h / 2.0);
    const double est =
        std::max({std::abs(half.f1 - full.f1), std::abs(half.f2 - full.f2), std::abs(half.f3 - full.f3)}) / 15.0;
    if (!(est <= local_tol))
      throw convergence_error("disentangle_ode_oracle: step-size failure at nu = " + std::to_string(k * h) +
                              " (local error estimate " + std::to_string(est) + ")");
    y = half;
    path.push_back(y);
  }
  return path;
}

inline DisentangleFunctions disentangle_ode_oracle(double nu_end, unsigned steps,
                                                   double local_tol = kOdeLocalTolerance) {
  return disentangle_ode_trajectory(nu_end, steps, local_tol).back();
}

}  // namespace bohm_squeeze::fock
