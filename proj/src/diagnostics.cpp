#include "roughldp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace roughldp {

namespace {

// max over windows of `width+1` consecutive samples of (max - min)
double window_oscillation(const std::vector<double>& path, int width) {
  const int n = static_cast<int>(path.size());
  std::deque<int> maxq, minq;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    while (!maxq.empty() && path[maxq.back()] <= path[i]) maxq.pop_back();
    maxq.push_back(i);
    while (!minq.empty() && path[minq.back()] >= path[i]) minq.pop_back();
    minq.push_back(i);
    const int lo = i - width;
    while (maxq.front() < lo) maxq.pop_front();
    while (minq.front() < lo) minq.pop_front();
    if (i >= width || i == n - 1)
      best = std::max(best, path[maxq.front()] - path[minq.front()]);
  }
  return best;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::vector<double> empirical_modulus(const std::vector<double>& path,
                                      const std::vector<int>& lags) {
  std::vector<double> out;
  out.reserve(lags.size());
  for (const int lag : lags) {
    if (lag < 1)
      throw std::invalid_argument("empirical_modulus: lag below one cell");
    if (lag >= static_cast<int>(path.size()))
      throw std::invalid_argument("empirical_modulus: lag exceeds the path");
    out.push_back(window_oscillation(path, lag));
  }
  return out;
}

HolderFit holder_estimate(const std::vector<double>& path, int lag_lo,
                          int lag_hi) {
  std::vector<int> lags;
  for (int lag = std::max(1, lag_lo); lag <= lag_hi; lag *= 2)
    lags.push_back(lag);
  if (lags.size() < 4)
    throw std::invalid_argument("holder_estimate: need >= 4 dyadic lags");
  const std::vector<double> osc = empirical_modulus(path, lags);
  HolderFit fit;
  fit.lags_used = static_cast<int>(lags.size());
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (!(osc[i] > 0.0))
      throw std::invalid_argument("holder_estimate: degenerate oscillation");
    xs.push_back(std::log(static_cast<double>(lags[i])));
    ys.push_back(std::log(osc[i]));
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + fit.slope * xs[i]);
    rss += e * e;
  }
  if (n > 2) fit.stderr_ = std::sqrt(rss / (n - 2) / (sxx - sx * sx / n));
  // estimated exponent lives in [0,1]
  fit.slope = std::clamp(fit.slope, 0.0, 1.0);
  return fit;
}

LilStatistic lil_statistic(const PathEnsemble& ensemble, const Modulus& eta,
                           double t_min, double threshold) {
  const Grid& grid = ensemble.grid;
  const int np = grid.points();
  if (t_min < 2.0 * grid.dt() - 1e-15)
    throw std::invalid_argument("lil_statistic: t_min must be >= 2 dt");
  LilStatistic res;
  res.t_lo = t_min;
  res.t_hi = grid.horizon / 4.0;
  // log log (1/eta^2) needs eta^2(t) < 1/e on the window
  const double cap = std::exp(-1.0) * (1.0 - 1e-12);
  while (res.t_hi > res.t_lo && eta.eta_sq(res.t_hi) >= cap) {
    res.t_hi = 0.9 * res.t_hi;
    res.range_shrunk = true;
  }
  if (!(res.t_hi > res.t_lo))
    throw std::invalid_argument(
        "lil_statistic: eta^2 >= 1/e over the whole window");
  std::vector<double> scale(np, 0.0);
  for (int j = 0; j < np; ++j) {
    const double t = grid.time(j);
    if (t < res.t_lo || t > res.t_hi) continue;
    const double e2 = eta.eta_sq(t);
    scale[j] = eta.eta(t) * std::sqrt(std::log(std::log(1.0 / e2)));
  }
  res.per_path.reserve(ensemble.n_paths);
  std::size_t exceed = 0;
  for (std::size_t p = 0; p < ensemble.n_paths; ++p) {
    double stat = 0.0;
    for (int j = 0; j < np; ++j) {
      if (scale[j] <= 0.0) continue;
      stat = std::max(stat, std::fabs(ensemble.value(p, j)) / scale[j]);
    }
    res.per_path.push_back(stat);
    if (stat > threshold) ++exceed;
  }
  res.exceed_fraction =
      static_cast<double>(exceed) / static_cast<double>(ensemble.n_paths);
  return res;
}

RoughnessReport roughness_report(const PathEnsemble& ensemble,
                                 const Modulus* eta_for_lil,
                                 double lil_t_min) {
  const Grid& grid = ensemble.grid;
  const int n = grid.steps;
  RoughnessReport rep;
  for (int lag = 1; lag <= n / 2; lag *= 2) rep.lags.push_back(lag);

  const int np = grid.points();
  std::vector<std::vector<double>> osc_by_lag(rep.lags.size());
  std::vector<double> stderrs;
  for (std::size_t p = 0; p < ensemble.n_paths; ++p) {
    std::vector<double> path(ensemble.values.begin() + p * np,
                             ensemble.values.begin() + (p + 1) * np);
    const std::vector<double> osc = empirical_modulus(path, rep.lags);
    for (std::size_t k = 0; k < rep.lags.size(); ++k)
      osc_by_lag[k].push_back(osc[k]);
    const HolderFit fit = holder_estimate(path, 4, std::max(4 * 8, n / 8));
    rep.per_path_slopes.push_back(fit.slope);
    stderrs.push_back(fit.stderr_);
  }
  for (auto& v : osc_by_lag) rep.median_oscillation.push_back(median(v));
  rep.median_slope = median(rep.per_path_slopes);
  rep.slope_stderr_median = median(stderrs);
  if (eta_for_lil != nullptr) {
    const double tmin =
        lil_t_min > 0.0 ? lil_t_min : 2.0 * grid.dt();
    rep.lil_exceed_fraction =
        lil_statistic(ensemble, *eta_for_lil, tmin).exceed_fraction;
  }
  return rep;
}

}  // namespace roughldp
