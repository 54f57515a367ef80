// Covariance machinery for Volterra Gaussian processes:
// C(t_i,t_j) = int_0^{min} K(t_i,u) K(t_j,u) du by singularity-aware
// quadrature, the canonical metric, and the Mocioalca-Viens sandwich check.
#pragma once

#include <string>
#include <vector>

#include "roughldp/grid.hpp"
#include "roughldp/kernel.hpp"
#include "roughldp/modulus.hpp"

namespace roughldp {

struct CovarianceMatrix {
  Grid grid;
  int quad_resolution = 8;
  std::string kernel_desc;
  std::vector<double> data;  // (n+1) x (n+1), row-major, symmetric

  double at(int i, int j) const { return data[i * grid.points() + j]; }
  double& at(int i, int j) { return data[i * grid.points() + j]; }
};

// quad_resolution controls the sub-cell refinement of each integral
// (default 8x the grid).  Throws if the assembled matrix fails the PSD
// check at pivot tolerance 1e-10 * max diagonal; no eigenvalue repair is
// attempted, indefiniteness means the quadrature must be refined.
CovarianceMatrix covariance_matrix(const VolterraKernel& kernel,
                                   const Grid& grid, int quad_resolution = 8,
                                   int workers = 1);

// delta(t_i,t_j) = sqrt(max(0, C(ii) + C(jj) - 2 C(ij))).
std::vector<double> canonical_metric(const CovarianceMatrix& cov);

struct SandwichReport {
  double max_lower_violation = 0.0;  // relative amount delta falls below eta
  double max_upper_violation = 0.0;  // relative amount delta exceeds 2 eta
  int lower_pair_i = -1, lower_pair_j = -1;
  int upper_pair_i = -1, upper_pair_j = -1;
  int pairs_checked = 0;
};

// Checks eta(|t-s|) <= delta(t,s) <= 2 eta(|t-s|) over grid pairs with
// |t-s| >= 2 dt (closer pairs sit in the discretization shadow).
SandwichReport metric_sandwich_report(const std::vector<double>& delta,
                                      const Modulus& eta, const Grid& grid);

// Cell integrals W[j][i] = int_{t_i}^{t_{i+1}} K(t_j, u) du for i < j,
// returned as a row-major (n+1) x n matrix (zero for i >= j).  Exact via
// the tau antiderivative when available, quadrature otherwise.
std::vector<double> cell_integral_matrix(const VolterraKernel& kernel,
                                         const Grid& grid);

}  // namespace roughldp
