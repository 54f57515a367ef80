// Dense symmetric-matrix helpers sized for covariance work (n ~ 10^3).
#pragma once

#include <cstddef>
#include <vector>

namespace roughldp {

// In-place lower Cholesky of the row-major symmetric matrix a (n x n).
// Pivots below pivot_tol * max_diag are treated as exact zeros (their column
// is zeroed: positive semidefinite input); pivots below -pivot_tol * max_diag
// abort.  Returns false on indefiniteness.
bool cholesky_lower(std::vector<double>& a, std::size_t n, double pivot_tol);

// Solves A x = b for symmetric positive definite A via Cholesky.
// Throws std::runtime_error on failure.
std::vector<double> solve_spd(std::vector<double> a, std::size_t n,
                              std::vector<double> b, double pivot_tol = 1e-14);

}  // namespace roughldp
