#include "roughldp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roughldp {

bool cholesky_lower(std::vector<double>& a, std::size_t n, double pivot_tol) {
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    max_diag = std::max(max_diag, std::fabs(a[i * n + i]));
  const double tol = pivot_tol * std::max(max_diag, 1e-300);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (d < -tol) return false;
    if (d <= tol) {
      // semidefinite direction: zero the pivot column
      a[j * n + j] = 0.0;
      for (std::size_t i = j + 1; i < n; ++i) a[i * n + j] = 0.0;
      continue;
    }
    const double ljj = std::sqrt(d);
    a[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / ljj;
    }
  }
  // clear the upper triangle so the result is a clean factor
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a[i * n + j] = 0.0;
  return true;
}

std::vector<double> solve_spd(std::vector<double> a, std::size_t n,
                              std::vector<double> b, double pivot_tol) {
  if (!cholesky_lower(a, n, pivot_tol))
    throw std::runtime_error("solve_spd: matrix not positive definite");
  // forward L y = b
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    const double d = a[i * n + i];
    if (d == 0.0) throw std::runtime_error("solve_spd: singular pivot");
    b[i] = s / d;
  }
  // backward L^T x = y
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= a[k * n + ii] * b[k];
    b[ii] = s / a[ii * n + ii];
  }
  return b;
}

}  // namespace roughldp
