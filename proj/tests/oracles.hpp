#pragma once

// Reference computations used by the tests. They deliberately avoid the
// library's FFT and solver paths: dense linear algebra and direct sums only.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

#include "loschmidt/core.hpp"

namespace oracle {

using Complex = std::complex<double>;
using loschmidt::kPi;

/// Gaussian elimination with partial pivoting on a dense square system.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) throw std::runtime_error("singular system");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

/// Zero-mean solution of (phi_{i+1} - 2 phi_i + phi_{i-1}) / dx^2 = (rho_i - mean) / K0^2
/// via the bordered system [L 1; 1^T 0] [phi; lambda] = [rhs; 0].
inline std::vector<double> dense_periodic_poisson(const std::vector<double>& rho, double K0) {
  const std::size_t n = rho.size();
  const double dx = 2.0 * kPi / static_cast<double>(n);
  double mean = 0.0;
  for (double r : rho) mean += r;
  mean /= static_cast<double>(n);
  std::vector<std::vector<double>> a(n + 1, std::vector<double>(n + 1, 0.0));
  std::vector<double> b(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i][(i + n - 1) % n] += 1.0 / (dx * dx);
    a[i][i] += -2.0 / (dx * dx);
    a[i][(i + 1) % n] += 1.0 / (dx * dx);
    a[i][n] = 1.0;
    a[n][i] = 1.0;
    b[i] = (rho[i] - mean) / (K0 * K0);
  }
  auto x = dense_solve(a, b);
  x.pop_back();
  return x;
}

/// Random unit-mass field with smooth-ish content, from a test-local generator.
inline std::vector<Complex> random_unit_field(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::vector<Complex> v(n);
  double mass = 0.0;
  for (auto& z : v) {
    z = Complex(normal(gen), normal(gen));
    mass += std::norm(z);
  }
  const double scale = std::sqrt(static_cast<double>(n) / mass);
  for (auto& z : v) z *= scale;
  return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

template <typename A, typename B>
double max_abs_diff_c(const A& a, const B& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double rms_diff(const loschmidt::WaveField& a, const loschmidt::WaveField& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc / static_cast<double>(a.size()));
}

/// Slope of log(err) against log(step) by least squares.
inline double loglog_slope(const std::vector<double>& step, const std::vector<double>& err) {
  const double n = static_cast<double>(step.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < step.size(); ++i) {
    const double x = std::log(step[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
