// Empirical roughness measurement: discrete oscillation moduli, log-log
// Holder slopes, and the iterated-logarithm statistic that separates super
// rough drivers from fractional ones.
#pragma once

#include <vector>

#include "roughldp/modulus.hpp"
#include "roughldp/sampling.hpp"

namespace roughldp {

// Exact discrete sup_{|i-j| <= lag} |X_i - X_j| for each lag (in cells,
// each >= 1), via sliding-window extrema.
std::vector<double> empirical_modulus(const std::vector<double>& path,
                                      const std::vector<int>& lags);

struct HolderFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  int lags_used = 0;
};

// Least-squares slope of log oscillation vs log lag over dyadic lags in
// [lag_lo, lag_hi] cells (needs >= 4; smallest lags are discretization-
// dominated, largest boundary-dominated, hence the [4 dt, T/8] default).
HolderFit holder_estimate(const std::vector<double>& path, int lag_lo,
                          int lag_hi);

struct LilStatistic {
  std::vector<double> per_path;
  double exceed_fraction = 0.0;  // fraction of paths with statistic > threshold
  bool range_shrunk = false;     // eta^2 >= 1/e forced a smaller window
  double t_lo = 0.0, t_hi = 0.0;
};

// Per-path sup over grid times in [t_min, T/4] of
//   |Bhat_t| / (eta(t) sqrt(log log (1 / eta^2(t)))),
// with the exceedance fraction over `threshold` (1.0 by default: a weak
// finite-resolution shadow of the a.s. limsup >= sqrt(2)).
LilStatistic lil_statistic(const PathEnsemble& ensemble, const Modulus& eta,
                           double t_min, double threshold = 1.0);

struct RoughnessReport {
  std::vector<int> lags;                // cells
  std::vector<double> median_oscillation;
  std::vector<double> per_path_slopes;
  double median_slope = 0.0;
  double slope_stderr_median = 0.0;
  double lil_exceed_fraction = -1.0;    // -1 when no modulus was supplied
};

// Dyadic-lag report over an ensemble; the LIL column is filled only when a
// modulus for the driver is supplied.
RoughnessReport roughness_report(const PathEnsemble& ensemble,
                                 const Modulus* eta_for_lil = nullptr,
                                 double lil_t_min = 0.0);

}  // namespace roughldp
