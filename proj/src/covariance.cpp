#include "roughldp/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roughldp/linalg.hpp"
#include "roughldp/parallel.hpp"
#include "roughldp/quadrature.hpp"

namespace roughldp {

CovarianceMatrix covariance_matrix(const VolterraKernel& kernel,
                                   const Grid& grid, int quad_resolution,
                                   int workers) {
  if (grid.horizon > kernel.horizon() * (1.0 + 1e-12))
    throw std::invalid_argument("covariance_matrix: grid exceeds kernel horizon");
  const int np = grid.points();
  CovarianceMatrix cov;
  cov.grid = grid;
  cov.quad_resolution = quad_resolution;
  cov.kernel_desc = kernel.description();
  cov.data.assign(static_cast<std::size_t>(np) * np, 0.0);

  const double a_diag = kernel.diag_exponent();
  const double a_zero = 2.0 * kernel.zero_exponent();

  // rows are independent; parallel over i with fixed per-row work
  parallel_blocks(np - 1, 1, workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t row = lo; row < hi; ++row) {
      const int i = static_cast<int>(row) + 1;
      const double ti = grid.time(i);
      const int cells = std::min(512, std::max(4, quad_resolution * i));
      for (int j = i; j < np; ++j) {
        const double tj = grid.time(j);
        // integrand singular at u->ti from K(ti,.) (twice on the diagonal)
        const bool diag = j == i;
        const double hi_exp = diag ? std::max(-0.999, 2.0 * a_diag) : a_diag;
        const double val = integrate_endpoint_singular(
            [&](double u, double, double dhi) {
              const double ki = kernel.eval_gap(ti, dhi);
              return ki * (diag ? ki : kernel(tj, u));
            },
            0.0, ti, std::max(-0.999, a_zero), hi_exp, cells);
        cov.at(i, j) = val;
        cov.at(j, i) = val;
      }
    }
  });

  // PSD check at the pivot tolerance; failure signals coarse quadrature
  std::vector<double> chk = cov.data;
  if (!cholesky_lower(chk, np, 1e-10))
    throw std::runtime_error(
        "covariance_matrix: matrix indefinite beyond pivot tolerance; "
        "increase quad_resolution");
  return cov;
}

std::vector<double> canonical_metric(const CovarianceMatrix& cov) {
  const int np = cov.grid.points();
  std::vector<double> delta(static_cast<std::size_t>(np) * np, 0.0);
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < np; ++j) {
      const double d2 = cov.at(i, i) + cov.at(j, j) - 2.0 * cov.at(i, j);
      delta[i * np + j] = std::sqrt(std::max(0.0, d2));
    }
  }
  return delta;
}

SandwichReport metric_sandwich_report(const std::vector<double>& delta,
                                      const Modulus& eta, const Grid& grid) {
  const int np = grid.points();
  const double dt = grid.dt();
  SandwichReport rep;
  for (int i = 0; i < np; ++i) {
    for (int j = i + 1; j < np; ++j) {
      const double gap = grid.time(j) - grid.time(i);
      if (gap < 2.0 * dt - 1e-12) continue;
      const double e = eta.eta(gap);
      if (e <= 0.0) continue;
      const double d = delta[i * np + j];
      ++rep.pairs_checked;
      const double lower = (e - d) / e;
      const double upper = (d - 2.0 * e) / (2.0 * e);
      if (lower > rep.max_lower_violation) {
        rep.max_lower_violation = lower;
        rep.lower_pair_i = i;
        rep.lower_pair_j = j;
      }
      if (upper > rep.max_upper_violation) {
        rep.max_upper_violation = upper;
        rep.upper_pair_i = i;
        rep.upper_pair_j = j;
      }
    }
  }
  return rep;
}

std::vector<double> cell_integral_matrix(const VolterraKernel& kernel,
                                         const Grid& grid) {
  const int n = grid.steps;
  const int np = grid.points();
  std::vector<double> w(static_cast<std::size_t>(np) * n, 0.0);
  for (int j = 1; j < np; ++j) {
    const double tj = grid.time(j);
    for (int i = 0; i < j; ++i) {
      const double a = grid.time(i);
      const double b = grid.time(i + 1);
      double v;
      if (kernel.stationary() && kernel.has_tau_antiderivative()) {
        v = kernel.tau_antiderivative(tj - a) - kernel.tau_antiderivative(tj - b);
      } else {
        const bool adjacent = i + 1 == j;
        const double hi_exp = adjacent ? kernel.diag_exponent() : 0.0;
        const double lo_exp = (i == 0) ? kernel.zero_exponent() : 0.0;
        v = integrate_endpoint_singular(
            [&](double u, double, double dhi) {
              return adjacent ? kernel.eval_gap(tj, dhi) : kernel(tj, u);
            },
            a, b, std::max(-0.999, lo_exp), std::max(-0.999, hi_exp), 4);
      }
      w[static_cast<std::size_t>(j) * n + i] = v;
    }
  }
  return w;
}

}  // namespace roughldp
