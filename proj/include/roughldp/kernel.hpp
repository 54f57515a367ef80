// Admissible Volterra kernels K(t,s): Brownian, Molchan-Golosov (fBM),
// Riemann-Liouville, and the Mocioalca-Viens stationary family
// K(t,s) = tau(t-s) with tau = sqrt((eta^2)').
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "roughldp/modulus.hpp"

namespace roughldp {

enum class KernelFamily {
  Brownian,
  MolchanGolosov,
  RiemannLiouville,
  MvStationary,
  Custom
};

class VolterraKernel {
 public:
  static VolterraKernel brownian(double horizon);
  // H in (0,1); H = 1/2 routes to the Brownian kernel.  The normalization
  // constants come from the Beta-type integrals of the kernel formulas,
  // evaluated once by endpoint-substituted quadrature and cached.
  static VolterraKernel molchan_golosov(double hurst, double horizon);
  static VolterraKernel riemann_liouville(double hurst, double horizon);
  // Requires an MV-admissible modulus ((eta^2)' positive non-increasing).
  static VolterraKernel mv_stationary(const Modulus& m);
  static VolterraKernel custom(std::function<double(double, double)> eval,
                               double horizon, double diag_exponent,
                               double zero_exponent, std::string description);

  // K(t,s); zero for s > t (Volterra property) and for s <= 0 outside the
  // integrable-singularity domain.
  double operator()(double t, double s) const;

  // K(t, t - gap) with the gap supplied exactly; quadrature near the
  // diagonal must use this form, t - s subtraction loses the singular
  // factor's precision.
  double eval_gap(double t, double gap) const;

  bool stationary() const { return stationary_; }
  double tau(double x) const;                   // stationary kernels only
  double tau_sq_antiderivative(double x) const; // = eta^2(x), exact
  bool has_tau_antiderivative() const { return has_tau_antideriv_; }
  double tau_antiderivative(double x) const;    // int_0^x tau, when elementary

  // K(t,s) ~ (t-s)^diag_exponent as s -> t-, ~ s^zero_exponent as s -> 0+;
  // both in (-1/2, 0].
  double diag_exponent() const { return diag_exp_; }
  double zero_exponent() const { return zero_exp_; }

  KernelFamily family() const { return family_; }
  double horizon() const { return horizon_; }
  double hurst() const { return hurst_; }
  const std::string& description() const { return desc_; }

 private:
  VolterraKernel() = default;

  KernelFamily family_{};
  double horizon_ = 0.0;
  double hurst_ = 0.0;
  double norm_const_ = 1.0;  // Molchan-Golosov c_H
  bool stationary_ = false;
  bool has_tau_antideriv_ = false;
  double diag_exp_ = 0.0;
  double zero_exp_ = 0.0;
  std::string desc_;
  std::optional<Modulus> modulus_;
  std::function<double(double, double)> custom_eval_;
};

// sup over grid pairs |t-s| <= lag of int_0^T (K(t,u)-K(s,u))^2 du,
// the squared L2-modulus of the kernel, on a uniform grid with
// `grid_resolution` steps.
double l2_modulus(const VolterraKernel& kernel, double lag,
                  int grid_resolution);

// V(t) = int_0^t K(t,s)^2 ds at the requested times; exact for stationary
// kernels via the eta^2 antiderivative, quadrature otherwise.
std::vector<double> variance_function(const VolterraKernel& kernel,
                                      const std::vector<double>& times);

}  // namespace roughldp
