// Small-noise asymptotic rates for barrier options, exit-time probabilities,
// binary calls and calls, all reduced to rate_solver problems.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "roughldp/grid.hpp"
#include "roughldp/model.hpp"
#include "roughldp/rate_solver.hpp"

namespace roughldp {

struct BarrierSpec {
  enum class Kind { UpIn, UpOut, DownIn, DownOut };

  Kind kind{};
  double barrier = 0.0;  // price-level K > 0
  double cash = 1.0;     // payout G > 0
  double rate_r = 0.0;   // interest rate >= 0
};

struct AsymptoticReport {
  double rate = 0.0;
  double attaining_time = 0.0;  // hitting time t* for the in-kinds
  double attaining_x = 0.0;     // minimizing terminal value for call rates
  std::string branch;
  std::string warning;
  RateResult solver;  // diagnostics of the attaining solve
  // (t*, I_{t*}) for the in-kinds, (x, Ihat_T(x)) for the call scans
  std::vector<std::pair<double, double>> profile;
  bool growth_certified = false;
  double growth_c1 = 0.0, growth_c2 = 0.0;
};

// Barrier rate L_k = inf over the barrier event set of the sample-path rate.
// In-kinds reduce to a scan of terminal problems: continuing with zero
// controls after the hitting time is free, so
//   L = min over grid times t* of I_{t*}(log K - x0).
// Out-kinds are zero when the zero-cost path t -> int b(s,0) ds stays in the
// open region; otherwise a quadratic-hinge penalty formulation (penalty
// 1e2 -> 1e6) estimates the constrained infimum.
// Requires strictly positive volatility and constant drift.
AsymptoticReport barrier_rate(const ModelSpec& model, const BarrierSpec& spec,
                              const Grid& grid, const SolverOptions& opts = {});

// Exit-time rate of the log-price from (-inf, log K): identical to the
// up-and-in barrier rate (same code path).
AsymptoticReport exit_time_rate(const ModelSpec& model, double barrier_price,
                                const Grid& grid, const SolverOptions& opts = {});

// Binary call rate: inf over x >= log K - x0 of Ihat_T(x), scanned outward
// from the boundary on a geometric grid (Ihat_T is continuous off rT).
// Requires the out-of-the-money configuration K > s0 e^{rT}.
AsymptoticReport binary_call_rate(const ModelSpec& model, double strike,
                                  const Grid& grid,
                                  const SolverOptions& opts = {});

// Call rate: same infimum as the binary call; additionally records whether
// the sublinear growth condition sigma^2 <= c1 + c2 x^2 is certified, and
// warns (without refusing the rate) when it is not.
AsymptoticReport call_rate(const ModelSpec& model, double strike,
                           const Grid& grid, const SolverOptions& opts = {});

}  // namespace roughldp
