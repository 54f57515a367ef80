// Small-noise Monte Carlo: event probabilities, eps-sweeps of eps log p,
// affine extrapolation of the eps -> 0 limit, and comparison against solver
// rates.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roughldp/grid.hpp"
#include "roughldp/model.hpp"

namespace roughldp {

struct EventSpec {
  enum class Kind { TerminalGeq, TerminalLeq, BarrierMaxGeq, BarrierMinLeq };
  Kind kind{};
  double threshold = 0.0;  // log-price units relative to x0
};

struct MCEstimate {
  double eps = 0.0;
  std::size_t n_paths = 0;  // 0 marks an analytic (noise-free) row
  std::size_t hits = 0;
  double p_hat = 0.0;
  double se = 0.0;          // sqrt(p(1-p)/n)
  double eps_log_p = 0.0;   // NaN when p_hat == 0
  double band_lo = 0.0, band_hi = 0.0;  // delta-method 1-sigma band
  bool zero_hits = false;
};

struct SweepTable {
  std::vector<MCEstimate> rows;  // strictly decreasing eps
  bool fitted = false;
  double intercept = 0.0;  // -L_hat
  double slope = 0.0;
  double fit_residual = 0.0;
  int usable_rows = 0;
  std::string advisory;  // pilot-run warning, if any

  double l_hat() const { return -intercept; }
};

// Indicator-mean estimate of P(X^{(eps)} - x0 in A) from a fresh ensemble;
// deterministic per (seed, grid, scheme).
MCEstimate estimate_probability(const ModelSpec& model, double eps,
                                const EventSpec& event, std::size_t n_paths,
                                std::uint64_t seed, const Grid& grid,
                                Scheme scheme = Scheme::Convolution,
                                int workers = 1);

// Exact normal tail for constant volatility and constant drift:
// X_T - x0 ~ N(rT - eps sigma^2 T / 2, eps sigma^2 T).  Terminal events only.
double analytic_gaussian_probability(const ModelSpec& model, double eps,
                                     const EventSpec& event);

// MC sweep over a decreasing eps list; zero-hit rows are excluded from the
// ordinary-least-squares fit of eps log p = -L + a eps (fewer than 3 usable
// rows leaves the table unfitted).  A 1e3-path pilot at the smallest eps
// populates the advisory when the expected hit count is below 50.
SweepTable ldp_sweep(const ModelSpec& model, const EventSpec& event,
                     const std::vector<double>& eps_list,
                     std::size_t n_paths_per_eps, std::uint64_t seed,
                     const Grid& grid, Scheme scheme = Scheme::Convolution,
                     int workers = 1);

// Same sweep fed by the constant-sigma analytic oracle instead of MC.
SweepTable ldp_sweep_analytic(const ModelSpec& model, const EventSpec& event,
                              const std::vector<double>& eps_list);

struct CompareResult {
  bool consistent = false;
  double gap = 0.0;
  double l_hat = 0.0;
  double l_solver = 0.0;
};

// Verdict on |L_hat - L_solver| <= tolerance * max(L_solver, 0.05).
CompareResult compare_rate(const SweepTable& sweep, double solver_rate,
                           double tolerance);

}  // namespace roughldp
