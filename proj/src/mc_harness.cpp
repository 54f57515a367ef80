#include "roughldp/mc_harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "roughldp/parallel.hpp"

namespace roughldp {

namespace {

double normal_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

bool event_hit(const EventSpec& event, const double* path, int np) {
  switch (event.kind) {
    case EventSpec::Kind::TerminalGeq:
      return path[np - 1] >= event.threshold;
    case EventSpec::Kind::TerminalLeq:
      return path[np - 1] <= event.threshold;
    case EventSpec::Kind::BarrierMaxGeq: {
      for (int j = 0; j < np; ++j)
        if (path[j] >= event.threshold) return true;
      return false;
    }
    case EventSpec::Kind::BarrierMinLeq: {
      for (int j = 0; j < np; ++j)
        if (path[j] <= event.threshold) return true;
      return false;
    }
  }
  return false;
}

MCEstimate make_row(double eps, std::size_t n, std::size_t hits) {
  MCEstimate row;
  row.eps = eps;
  row.n_paths = n;
  row.hits = hits;
  row.p_hat = static_cast<double>(hits) / static_cast<double>(n);
  row.se = std::sqrt(row.p_hat * (1.0 - row.p_hat) / static_cast<double>(n));
  if (hits == 0) {
    row.zero_hits = true;
    row.eps_log_p = std::numeric_limits<double>::quiet_NaN();
    row.band_lo = row.band_hi = row.eps_log_p;
    return row;
  }
  row.eps_log_p = eps * std::log(row.p_hat);
  // delta method: sd(eps log p) = eps sqrt((1-p)/(n p))
  const double sd = eps * std::sqrt((1.0 - row.p_hat) /
                                    (static_cast<double>(n) * row.p_hat));
  row.band_lo = row.eps_log_p - sd;
  row.band_hi = row.eps_log_p + sd;
  return row;
}

void fit_table(SweepTable& table) {
  // OLS of eps log p on eps over the usable rows.  Delta-method variances
  // are reported as per-row bands; they do not reweight the regression
  // (inverse-variance weights would concentrate the fit on the largest-eps
  // rows, where the affine model is worst).
  std::vector<double> xs, ys;
  for (const auto& r : table.rows) {
    if (r.zero_hits) continue;
    xs.push_back(r.eps);
    ys.push_back(r.eps_log_p);
  }
  table.usable_rows = static_cast<int>(xs.size());
  if (table.usable_rows < 3) {
    table.fitted = false;
    return;
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
  table.slope = (n * sxy - sx * sy) / denom;
  table.intercept = (sy - table.slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (table.intercept + table.slope * xs[i]);
    rss += e * e;
  }
  table.fit_residual = std::sqrt(rss / n);
  table.fitted = true;
}

void check_eps_list(const std::vector<double>& eps_list) {
  if (eps_list.empty())
    throw std::invalid_argument("ldp_sweep: eps list must not be empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] <= 1.0))
      throw std::invalid_argument("ldp_sweep: eps values must be in (0,1]");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("ldp_sweep: eps values must be strictly decreasing");
  }
}

}  // namespace

MCEstimate estimate_probability(const ModelSpec& model, double eps,
                                const EventSpec& event, std::size_t n_paths,
                                std::uint64_t seed, const Grid& grid,
                                Scheme scheme, int workers) {
  if (n_paths < 1000)
    throw std::invalid_argument("estimate_probability: need n_paths >= 1e3");
  const PathEnsemble ens =
      simulate_log_price(model, eps, grid, n_paths, seed, scheme, workers);
  const int np = grid.points();
  // fixed-size blocks summed in block order: worker-count independent
  const std::size_t block = 4096;
  const std::size_t n_blocks = (n_paths + block - 1) / block;
  std::vector<std::size_t> block_hits(n_blocks, 0);
  parallel_blocks(n_paths, block, workers, [&](std::size_t lo, std::size_t hi) {
    std::size_t h = 0;
    for (std::size_t p = lo; p < hi; ++p)
      if (event_hit(event, &ens.values[p * np], np)) ++h;
    block_hits[lo / block] = h;
  });
  std::size_t hits = 0;
  for (const std::size_t h : block_hits) hits += h;
  return make_row(eps, n_paths, hits);
}

double analytic_gaussian_probability(const ModelSpec& model, double eps,
                                     const EventSpec& event) {
  if (model.vol.family() != Volatility::Family::Constant)
    throw std::invalid_argument(
        "analytic_gaussian_probability: constant volatility required");
  if (!model.drift.is_constant())
    throw std::invalid_argument(
        "analytic_gaussian_probability: constant drift required");
  if (event.kind != EventSpec::Kind::TerminalGeq &&
      event.kind != EventSpec::Kind::TerminalLeq)
    throw std::invalid_argument(
        "analytic_gaussian_probability: terminal events only");
  const double sigma = model.vol.param_c();
  const double r = model.drift.constant_value();
  const double T = model.horizon;
  const double mean = r * T - 0.5 * eps * sigma * sigma * T;
  const double sd = std::sqrt(eps) * sigma * std::sqrt(T);
  const double z = (event.threshold - mean) / sd;
  return event.kind == EventSpec::Kind::TerminalGeq ? normal_tail(z)
                                                    : 1.0 - normal_tail(z);
}

SweepTable ldp_sweep(const ModelSpec& model, const EventSpec& event,
                     const std::vector<double>& eps_list,
                     std::size_t n_paths_per_eps, std::uint64_t seed,
                     const Grid& grid, Scheme scheme, int workers) {
  check_eps_list(eps_list);
  SweepTable table;
  // pilot advisory at the smallest eps
  {
    const MCEstimate pilot = estimate_probability(
        model, eps_list.back(), event, 1000, seed ^ 0x9E3779B97F4A7C15ull,
        grid, scheme, workers);
    const double expected_hits =
        pilot.p_hat * static_cast<double>(n_paths_per_eps);
    if (expected_hits < 50.0)
      table.advisory = "pilot expects ~" + std::to_string(expected_hits) +
                       " hits at eps=" + std::to_string(eps_list.back()) +
                       " (< 50); smallest-eps rows may be unusable";
  }
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    table.rows.push_back(estimate_probability(model, eps_list[k], event,
                                              n_paths_per_eps, seed + k, grid,
                                              scheme, workers));
  }
  fit_table(table);
  return table;
}

SweepTable ldp_sweep_analytic(const ModelSpec& model, const EventSpec& event,
                              const std::vector<double>& eps_list) {
  check_eps_list(eps_list);
  SweepTable table;
  for (const double eps : eps_list) {
    MCEstimate row;
    row.eps = eps;
    row.n_paths = 0;
    row.p_hat = analytic_gaussian_probability(model, eps, event);
    if (row.p_hat <= 0.0) {
      row.zero_hits = true;
      row.eps_log_p = std::numeric_limits<double>::quiet_NaN();
      row.band_lo = row.band_hi = row.eps_log_p;
    } else {
      row.eps_log_p = eps * std::log(row.p_hat);
      row.band_lo = row.band_hi = row.eps_log_p;
    }
    table.rows.push_back(row);
  }
  fit_table(table);
  return table;
}

CompareResult compare_rate(const SweepTable& sweep, double solver_rate,
                           double tolerance) {
  if (!sweep.fitted)
    throw std::invalid_argument("compare_rate: sweep has no fitted intercept");
  CompareResult res;
  res.l_hat = sweep.l_hat();
  res.l_solver = solver_rate;
  res.gap = std::fabs(res.l_hat - solver_rate);
  res.consistent = res.gap <= tolerance * std::max(solver_rate, 0.05);
  return res;
}

}  // namespace roughldp
