// Path sampling for Volterra Gaussian processes.  Two schemes share one
// ensemble type: exact Cholesky (the oracle) and the O(n^2)-per-path
// convolution scheme with exact per-cell variances for stationary kernels.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roughldp/covariance.hpp"
#include "roughldp/grid.hpp"
#include "roughldp/kernel.hpp"

namespace roughldp {

enum class Scheme { Cholesky, Convolution };

struct PathEnsemble {
  Grid grid;
  std::size_t n_paths = 0;
  std::vector<double> values;      // n_paths x (n+1), starts at 0
  std::vector<double> increments;  // n_paths x n driving dB (empty if unavailable)
  std::uint64_t seed = 0;
  Scheme scheme{};
  std::string kernel_desc;
  bool midpoint_fallback = false;  // convolution used cell-midpoint weights

  double value(std::size_t p, int j) const {
    return values[p * grid.points() + j];
  }
  double increment(std::size_t p, int i) const {
    return increments[p * grid.steps + i];
  }
};

// Exact sampling from the covariance matrix.  Draw p, component i consumes
// the counter (p, i, kStreamDrivingNoise); block-parallel and deterministic.
PathEnsemble sample_cholesky(const CovarianceMatrix& cov, std::size_t n_paths,
                             std::uint64_t seed, int workers = 1);

// Left-point discretization of the Wiener integral: B_{t_j} = sum w_{j,i} dB_i.
// Stationary kernels use exact per-cell variances
//   w_{j,i} = sqrt((eta^2(t_j - t_i) - eta^2(t_j - t_{i+1})) / dt),
// which makes Var B_{t_j} = eta^2(t_j) exactly; other kernels fall back to
// cell-midpoint weights with the fallback flag set.  The driving increments
// are kept for downstream correlation.
PathEnsemble sample_convolution(const VolterraKernel& kernel, const Grid& grid,
                                std::size_t n_paths, std::uint64_t seed,
                                int workers = 1);

}  // namespace roughldp
