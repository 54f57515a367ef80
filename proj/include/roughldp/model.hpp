// Time-inhomogeneous Gaussian stochastic volatility models
//   dS = S b(t, Bhat_t) dt + S sigma(t, Bhat_t) (rho_bar dW + rho dB)
// with the scaled log-price simulated through its Doleans-Dade solution.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "roughldp/kernel.hpp"
#include "roughldp/sampling.hpp"

namespace roughldp {

class Drift {
 public:
  static Drift constant(double r);
  static Drift affine(double intercept, double slope);  // b(t,u) = a + b u
  static Drift custom(std::function<double(double, double)> fn,
                      std::string description);

  double operator()(double t, double u) const { return fn_(t, u); }
  bool is_constant() const { return constant_; }
  double constant_value() const { return r_; }
  const std::string& description() const { return desc_; }

 private:
  std::function<double(double, double)> fn_;
  bool constant_ = false;
  double r_ = 0.0;
  std::string desc_;
};

class Volatility {
 public:
  enum class ZeroSet { Empty, UZero, Other };
  enum class Family { Constant, WickExp, RoughBergomi, AbsLinear, Custom };

  static Volatility constant(double sigma0);
  // Wick exponential of c * Bhat^{(eta)}:
  //   sigma(t,u) = exp{-c^2 eta(t)^2 / 2 + c u}
  static Volatility wick_exp(double c, const Modulus& eta);
  // sigma(t,u) = exp{-c^2 t^{2H} / (4 H Gamma(H+1/2)^2) + c u}
  static Volatility rough_bergomi(double c, double hurst);
  // Stein-Stein type: sigma(u) = c |u|, vanishing exactly on {u = 0}
  static Volatility abs_linear(double c);
  static Volatility custom(std::function<double(double, double)> fn,
                           bool strictly_positive, ZeroSet zero_set,
                           std::string description);

  double operator()(double t, double u) const { return fn_(t, u); }
  bool strictly_positive() const { return strictly_positive_; }
  ZeroSet zero_set() const { return zero_set_; }
  Family family() const { return family_; }
  double param_c() const { return c_; }
  const std::string& description() const { return desc_; }

 private:
  std::function<double(double, double)> fn_;
  bool strictly_positive_ = false;
  ZeroSet zero_set_ = ZeroSet::Empty;
  Family family_ = Family::Custom;
  double c_ = 0.0;
  std::string desc_;
};

struct ModelSpec {
  ModelSpec(Drift drift, Volatility vol, double rho, VolterraKernel kernel,
            double horizon, double x0);

  Drift drift;
  Volatility vol;
  double rho;
  VolterraKernel kernel;
  double horizon;
  double x0;

  double rho_bar() const;
};

// Simulates X^{(eps)} - x0 on the grid by left-point Euler accumulation of
//   int b(s, sqrt(eps) Bhat) ds - (eps/2) int sigma^2 ds
//   + sqrt(eps) int sigma (rho_bar dW + rho dB),
// reusing the dB that generated Bhat so the correlation is exact.
// Scheme::Convolution drives Bhat by the convolution sampler;
// Scheme::Cholesky samples (Bhat, dB) jointly from their exact covariance.
PathEnsemble simulate_log_price(const ModelSpec& model, double eps,
                                const Grid& grid, std::size_t n_paths,
                                std::uint64_t seed, Scheme scheme,
                                int workers = 1);

struct GrowthCheck {
  bool holds = false;
  bool analytic = false;    // certified from the family, not the lattice
  double c1 = 0.0, c2 = 0.0;
  double witness_t = 0.0, witness_u = 0.0;  // violation point when !holds
};

// Certifies sigma(t,u)^2 <= c1 + c2 u^2 on the lattice of
// [0,T] x [-box_radius, box_radius]; constant and abs_linear families are
// certified analytically when (c1,c2) dominates their exact constants.
GrowthCheck sublinear_growth_check(const Volatility& vol, double horizon,
                                   double box_radius, double c1, double c2,
                                   int lattice_n = 41);

// Family constants (c1,c2) with sigma^2 <= c1 + c2 u^2 globally, when they
// exist: constant -> (sigma0^2, 0), abs_linear -> (0, c^2).
std::optional<std::pair<double, double>> analytic_growth_certificate(
    const Volatility& vol);

struct OmegaContinuityProbe {
  double l_estimate = 0.0;       // max |f(x)-f(y)| / omega(||x-y||) on the box
  double l_half_box = 0.0;       // same on the half-radius box
  double growth_ratio = 0.0;     // l_estimate / l_half_box
};

// Empirical local omega-continuity constant of f(t,u) over the lattice of
// [0,T] x [-box_radius, box_radius] with ||.|| = |dt| + |du|.  Evidence, not
// proof: finite probing cannot verify Assumption C globally.
OmegaContinuityProbe assumption_c_probe(
    const std::function<double(double, double)>& fn,
    const std::function<double(double)>& omega, double horizon,
    double box_radius, int lattice_n = 15);

}  // namespace roughldp
