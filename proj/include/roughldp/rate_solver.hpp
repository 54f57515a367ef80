// Discretized Cameron-Martin variational problems behind the large-deviation
// rate functions: the sample-path rate (strictly positive volatility), the
// terminal rates for positive and vanishing volatility, and the path rate of
// the scaled Volterra driver.
//
// Paths are parametrized by a piecewise-constant derivative f_dot per grid
// cell; the kernel-smoothed path is the linear map
//   fhat(t_j) = sum_{i<j} W[j][i] f_dot_i,  W[j][i] = int_cell_i K(t_j,u) du.
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "roughldp/grid.hpp"
#include "roughldp/kernel.hpp"
#include "roughldp/model.hpp"

namespace roughldp {

struct DiscretePath {
  Grid grid;
  std::vector<double> f_dot;  // one derivative per cell

  // implied values f(t_j) = sum_{i<j} f_dot_i dt
  std::vector<double> values() const;
  double energy() const;  // (1/2) sum f_dot_i^2 dt
};

struct SolverOptions {
  double grad_tol = 1e-8;
  int max_iterations = 500;
  int random_starts = 8;  // plus the zero start where admissible
  std::uint64_t seed = 0x5eedULL;
  double start_scale = 1.0;
  std::vector<double> warm_start;  // optional extra start (scan chaining)
  int workers = 1;
};

struct RateResult {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> f_dot;
  std::vector<double> l_dot;  // implied orthogonal control, when defined
  bool converged = false;
  int iterations = 0;
  double grad_norm = 0.0;
  int starts_agreeing = 0;
  std::vector<double> start_values;
  bool l1_proximal = false;  // Lambda denominator hit its floor
  std::string branch;        // "L2", "L1", "least_norm"
  double residual = 0.0;     // j_rate constraint residual
};

// fhat(t_j), j = 0..n, for the given cell derivatives.
std::vector<double> volterra_hat(const std::vector<double>& f_dot,
                                 const VolterraKernel& kernel,
                                 const Grid& grid);

// Sample-path rate Q_T(g) for strictly positive volatility: minimizes over
// f_dot the discrete form of
//   (1/2) int [(g' - b(s,fhat) - rho sigma(s,fhat) f')/(rho_bar sigma)]^2
//   + (1/2) int f'^2.
// g enters as its grid values (g[0] = 0); paths outside the representable
// piecewise-linear class have infinite rate by convention.
RateResult qt_rate(const std::vector<double>& g_values, const ModelSpec& model,
                   const Grid& grid, const SolverOptions& opts = {});

// Terminal rate I_T(x) for strictly positive volatility.
RateResult it_rate(double x, const ModelSpec& model, const Grid& grid,
                   const SolverOptions& opts = {});

// Lambda(x,f) = (x - int[b + rho sigma f'])^2 / (rho_bar^2 int sigma^2).
// Denominators below the 1e-12 floor are flagged L1-proximal instead of
// silently clamped (the L1/L2 dichotomy is structural).
double lambda_xf(double x, const std::vector<double>& f_dot,
                 const ModelSpec& model, const Grid& grid,
                 bool* l1_proximal = nullptr);

// Terminal rate Ihat_T(x) for general volatility with zero set empty or
// exactly {u = 0}.  Two-branch minimum: the L1 branch is feasible iff
// x = int b(s,0) ds and then contributes zero (f = 0 attains it); the L2
// branch minimizes (1/2)[Lambda + int f'^2] with starts kept away from the
// zero path.  Other zero sets are rejected.
RateResult it_hat_rate(double x, const ModelSpec& model, const Grid& grid,
                       const SolverOptions& opts = {});

// Path rate of sqrt(eps) Bhat: J(g) = (1/2) inf { int f'^2 : fhat = g },
// solved as a Tikhonov-regularized least-norm problem on the discrete
// Volterra system.  A residual above residual_tol (relative) reports the
// rate as infinite with the residual attached.
RateResult j_rate(const std::vector<double>& g_values,
                  const VolterraKernel& kernel, const Grid& grid,
                  double tikhonov = 1e-10, double residual_tol = 1e-6);

}  // namespace roughldp
