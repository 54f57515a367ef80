#include "roughldp/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "roughldp/linalg.hpp"
#include "roughldp/parallel.hpp"
#include "roughldp/rng.hpp"

namespace roughldp {

PathEnsemble sample_cholesky(const CovarianceMatrix& cov, std::size_t n_paths,
                             std::uint64_t seed, int workers) {
  const int np = cov.grid.points();
  std::vector<double> factor = cov.data;
  if (!cholesky_lower(factor, np, 1e-10))
    throw std::runtime_error("sample_cholesky: covariance factorization failed");

  PathEnsemble ens;
  ens.grid = cov.grid;
  ens.n_paths = n_paths;
  ens.seed = seed;
  ens.scheme = Scheme::Cholesky;
  ens.kernel_desc = cov.kernel_desc;
  ens.values.assign(n_paths * static_cast<std::size_t>(np), 0.0);

  const CounterRng rng(seed);
  parallel_blocks(n_paths, 256, workers, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> z(np);
    for (std::size_t p = lo; p < hi; ++p) {
      for (int i = 0; i < np; ++i) z[i] = rng.normal(p, i, kStreamDrivingNoise);
      double* out = &ens.values[p * np];
      for (int i = 0; i < np; ++i) {
        double acc = 0.0;
        const double* li = &factor[static_cast<std::size_t>(i) * np];
        for (int k = 0; k <= i; ++k) acc += li[k] * z[k];
        out[i] = acc;
      }
    }
  });
  return ens;
}

PathEnsemble sample_convolution(const VolterraKernel& kernel, const Grid& grid,
                                std::size_t n_paths, std::uint64_t seed,
                                int workers) {
  if (grid.horizon > kernel.horizon() * (1.0 + 1e-12))
    throw std::invalid_argument("sample_convolution: grid exceeds kernel horizon");
  const int n = grid.steps;
  const int np = grid.points();
  const double dt = grid.dt();
  const double sqrt_dt = std::sqrt(dt);

  PathEnsemble ens;
  ens.grid = grid;
  ens.n_paths = n_paths;
  ens.seed = seed;
  ens.scheme = Scheme::Convolution;
  ens.kernel_desc = kernel.description();
  ens.values.assign(n_paths * static_cast<std::size_t>(np), 0.0);
  ens.increments.assign(n_paths * static_cast<std::size_t>(n), 0.0);

  const CounterRng rng(seed);

  if (kernel.stationary()) {
    // lag weights: w[l]^2 dt = eta^2(l dt) - eta^2((l-1) dt)
    std::vector<double> w(n + 1, 0.0);
    for (int l = 1; l <= n; ++l) {
      const double var_cell = kernel.tau_sq_antiderivative(l * dt) -
                              kernel.tau_sq_antiderivative((l - 1) * dt);
      w[l] = std::sqrt(std::max(0.0, var_cell) / dt);
    }
    parallel_blocks(n_paths, 64, workers, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t p = lo; p < hi; ++p) {
        double* db = &ens.increments[p * n];
        double* out = &ens.values[p * np];
        for (int i = 0; i < n; ++i)
          db[i] = sqrt_dt * rng.normal(p, i, kStreamDrivingNoise);
        for (int j = 1; j <= n; ++j) {
          double acc = 0.0;
          for (int i = 0; i < j; ++i) acc += w[j - i] * db[i];
          out[j] = acc;
        }
      }
    });
    return ens;
  }

  // Non-stationary fallback: cell-midpoint quadrature weights.
  ens.midpoint_fallback = true;
  std::vector<double> w(static_cast<std::size_t>(np) * n, 0.0);
  for (int j = 1; j <= n; ++j)
    for (int i = 0; i < j; ++i)
      w[static_cast<std::size_t>(j) * n + i] = kernel(grid.time(j), (i + 0.5) * dt);
  parallel_blocks(n_paths, 64, workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      double* db = &ens.increments[p * n];
      double* out = &ens.values[p * np];
      for (int i = 0; i < n; ++i)
        db[i] = sqrt_dt * rng.normal(p, i, kStreamDrivingNoise);
      for (int j = 1; j <= n; ++j) {
        double acc = 0.0;
        const double* wj = &w[static_cast<std::size_t>(j) * n];
        for (int i = 0; i < j; ++i) acc += wj[i] * db[i];
        out[j] = acc;
      }
    }
  });
  return ens;
}

}  // namespace roughldp
