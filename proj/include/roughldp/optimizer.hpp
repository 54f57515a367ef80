// Multi-start quasi-Newton minimization for the smooth but non-convex
// variational objectives: L-BFGS with Armijo backtracking, finite-difference
// gradients supplied by the objective.
#pragma once

#include <cstdint>
#include <vector>

namespace roughldp {

class ObjectiveFn {
 public:
  virtual ~ObjectiveFn() = default;
  virtual double value(const std::vector<double>& x) const = 0;
  // Central finite differences by default; objectives override with a
  // cheaper incremental version when the structure allows it.
  virtual void gradient(const std::vector<double>& x,
                        std::vector<double>& grad) const;
};

struct LocalOptions {
  double grad_tol = 1e-8;
  int max_iterations = 500;
  int memory = 8;
};

struct LocalResult {
  std::vector<double> x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

LocalResult lbfgs_minimize(const ObjectiveFn& fn, std::vector<double> x0,
                           const LocalOptions& opts = {});

struct MultistartOptions {
  int random_starts = 8;       // on top of the zero start
  bool include_zero_start = true;
  double start_scale = 1.0;    // std-dev of the random Gaussian starts
  std::uint64_t seed = 0x5eedULL;
  std::vector<std::vector<double>> extra_starts;  // e.g. warm starts
  int workers = 1;
  LocalOptions local;
};

struct MultistartResult {
  LocalResult best;
  int starts_agreeing = 0;  // starts whose value is within 1% of the best
  std::vector<double> start_values;
};

MultistartResult multistart_minimize(const ObjectiveFn& fn, int dim,
                                     const MultistartOptions& opts);

}  // namespace roughldp
