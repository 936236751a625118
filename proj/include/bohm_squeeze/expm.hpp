#pragma once

// Scaling-and-squaring matrix exponential with diagonal Pade approximants of
// degree 3, 5, 7, 9 or 13 (Higham, SIAM J. Matrix Anal. Appl. 26, 2005).

#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "bohm_squeeze/errors.hpp"

namespace bohm_squeeze {

namespace expm_detail {

inline constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                                 9.504178996162932e-1, 2.097847961257068e0,
                                                 5.371920351148152e0};

inline constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
inline constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
inline constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                                 25200.0,    1512.0,    56.0,      1.0};
inline constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                                  30270240.0,    2162160.0,    110880.0,     3960.0,
                                                  90.0,          1.0};
inline constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0, 129060195264000.0,
    10559470521600.0,    670442572800.0,      33522128640.0,      1323241920.0,       40840800.0,
    960960.0,            16380.0,             182.0,              1.0};

template <typename Matrix>
double one_norm(const Matrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

/// Low-degree approximant: U holds the odd part, V the even part.
template <typename Matrix, std::size_t N>
void pade_low(const Matrix& a, const std::array<double, N>& b, Matrix& u, Matrix& v) {
  const auto n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix odd = b[1] * id;
  Matrix even = b[0] * id;
  Matrix power = id;
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * a2;
    odd += b[k + 1] * power;
    even += b[k] * power;
  }
  u = a * odd;
  v = even;
}

template <typename Matrix>
void pade13(const Matrix& a, Matrix& u, Matrix& v) {
  const auto& b = kPade13;
  const auto n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix inner_u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  u = a * (inner_u + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace expm_detail

inline constexpr int kMaxSquarings = 128;

/// e^M for a dense square Eigen matrix (real or complex).
template <typename Derived>
typename Derived::PlainObject matrix_exponential(const Eigen::MatrixBase<Derived>& m) {
  using Matrix = typename Derived::PlainObject;
  using namespace expm_detail;
  const Matrix a = m;
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix_exponential: matrix must be square");
  if (a.rows() == 0) return a;
  if (!a.allFinite()) throw convergence_error("matrix_exponential: non-finite input");

  const double norm = one_norm(a);
  Matrix u, v;
  int squarings = 0;
  if (norm <= kTheta[0]) {
    pade_low(a, kPade3, u, v);
  } else if (norm <= kTheta[1]) {
    pade_low(a, kPade5, u, v);
  } else if (norm <= kTheta[2]) {
    pade_low(a, kPade7, u, v);
  } else if (norm <= kTheta[3]) {
    pade_low(a, kPade9, u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta[4]))));
    if (squarings > kMaxSquarings)
      throw convergence_error("matrix_exponential: norm " + std::to_string(norm) + " too large after scaling");
    const Matrix scaled = a / std::ldexp(1.0, squarings);
    pade13(scaled, u, v);
  }
  Matrix result = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  if (!result.allFinite()) throw convergence_error("matrix_exponential: result overflowed");
  return result;
}

}  // namespace bohm_squeeze
