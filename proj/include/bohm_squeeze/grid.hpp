#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bohm_squeeze {

/// Uniform rectangular sampling of the (x, y) plane.
struct GridSpec2D {
  double x_min = -1.0;
  double x_max = 1.0;
  double y_min = -1.0;
  double y_max = 1.0;
  std::size_t nx = 3;
  std::size_t ny = 3;

  void validate() const {
    if (!(x_max > x_min) || !(y_max > y_min))
      throw std::invalid_argument("GridSpec2D: empty extent");
    if (nx < 3 || ny < 3) throw std::invalid_argument("GridSpec2D: need at least 3 samples per axis");
  }

  double dx() const { return (x_max - x_min) / static_cast<double>(nx - 1); }
  double dy() const { return (y_max - y_min) / static_cast<double>(ny - 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
  double y(std::size_t j) const { return y_min + static_cast<double>(j) * dy(); }
  std::size_t size() const { return nx * ny; }
  /// Row-major with x fastest.
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }

  /// Symmetric square grid [-half_width, half_width]^2 with n samples per axis.
  static GridSpec2D square(double half_width, std::size_t n) {
    GridSpec2D g{-half_width, half_width, -half_width, half_width, n, n};
    g.validate();
    return g;
  }

  /// Same extent, spacing halved in both directions (n -> 2n - 1).
  GridSpec2D refined() const {
    return GridSpec2D{x_min, x_max, y_min, y_max, 2 * nx - 1, 2 * ny - 1};
  }

  /// Drops `ring` samples on every side.
  GridSpec2D shrunk(std::size_t ring) const {
    GridSpec2D g{x(ring), x(nx - 1 - ring), y(ring), y(ny - 1 - ring), nx - 2 * ring, ny - 2 * ring};
    return g;
  }

  friend bool operator==(const GridSpec2D&, const GridSpec2D&) = default;
};

template <typename T>
struct Field2D {
  GridSpec2D grid;
  double t = 0.0;
  std::vector<T> values;

  const T& operator()(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }
  T& operator()(std::size_t i, std::size_t j) { return values[grid.index(i, j)]; }
};

using ScalarField2D = Field2D<double>;
using ComplexField2D = Field2D<std::complex<double>>;

/// Samples f(x, y) on the grid; OpenMP-parallel over rows.
template <typename T, typename F>
Field2D<T> sample_field(const GridSpec2D& grid, double t, F&& f) {
  grid.validate();
  Field2D<T> out{grid, t, std::vector<T>(grid.size())};
  const auto ny = static_cast<std::ptrdiff_t>(grid.ny);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < ny; ++j) {
    const double y = grid.y(static_cast<std::size_t>(j));
    for (std::size_t i = 0; i < grid.nx; ++i) {
      out.values[grid.index(i, static_cast<std::size_t>(j))] = f(grid.x(i), y);
    }
  }
  return out;
}

/// Composite Simpson weights for n equally spaced samples with spacing h.
/// Odd n uses the 1-4-2-...-4-1 pattern; even n closes the last three
/// intervals with Simpson's 3/8 rule. n == 2 falls back to the trapezoid.
inline std::vector<double> simpson_weights(std::size_t n, double h) {
  if (n < 2) throw std::invalid_argument("simpson_weights: need at least 2 samples");
  std::vector<double> w(n, 0.0);
  if (n == 2) {
    w[0] = w[1] = h / 2.0;
    return w;
  }
  const bool odd = (n % 2 == 1);
  const std::size_t simpson_end = odd ? n - 1 : n - 4;  // last index covered by 1/3 rule
  for (std::size_t k = 0; k + 2 <= simpson_end; k += 2) {
    w[k] += h / 3.0;
    w[k + 1] += 4.0 * h / 3.0;
    w[k + 2] += h / 3.0;
  }
  if (!odd) {
    const std::size_t k = n - 4;
    w[k] += 3.0 * h / 8.0;
    w[k + 1] += 9.0 * h / 8.0;
    w[k + 2] += 9.0 * h / 8.0;
    w[k + 3] += 3.0 * h / 8.0;
  }
  return w;
}

/// Tensor-product Simpson integral of g(value, x, y) over the field's grid.
/// Row sums are reduced in fixed order so the result is thread-count independent.
template <typename T, typename G>
double integrate(const Field2D<T>& field, G&& g) {
  const GridSpec2D& grid = field.grid;
  const auto wx = simpson_weights(grid.nx, grid.dx());
  const auto wy = simpson_weights(grid.ny, grid.dy());
  std::vector<double> rows(grid.ny, 0.0);
  const auto ny = static_cast<std::ptrdiff_t>(grid.ny);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t jj = 0; jj < ny; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const double y = grid.y(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.nx; ++i) acc += wx[i] * g(field(i, j), grid.x(i), y);
    rows[j] = acc;
  }
  double total = 0.0;
  for (std::size_t j = 0; j < grid.ny; ++j) total += wy[j] * rows[j];
  return total;
}

}  // namespace bohm_squeeze
