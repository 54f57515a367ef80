// Moduli of continuity for Volterra Gaussian volatility drivers.
//
// Built-in families:
//   power:        eta(x) = x^H,               0 < H < 1
//   logarithmic:  eta_beta(x) = (-log x)^{-beta/2},  beta > 0, T < e^{-beta-1}
//   custom table: monotone samples with monotone-cubic interpolation
#pragma once

#include <string>
#include <vector>

namespace roughldp {

enum class ModulusFamily { Power, Logarithmic, CustomTable };

enum class FerniqueVerdict { Holds, Fails, Undecided };

class Modulus {
 public:
  static Modulus power(double hurst, double horizon);
  static Modulus logarithmic(double beta, double horizon);
  // xs must be strictly increasing starting at 0, etas strictly increasing
  // with etas[0] == 0; values interpolated by a monotone cubic.
  static Modulus custom_table(std::vector<double> xs, std::vector<double> etas,
                              double horizon);

  double eta(double x) const;
  double eta_sq(double x) const;
  double eta_sq_prime(double x) const;  // (eta^2)'

  // True when (eta^2)' is positive and non-increasing on (0,T), so the
  // stationary kernel tau = sqrt((eta^2)') is available.
  bool mv_admissible() const { return mv_; }

  ModulusFamily family() const { return family_; }
  double horizon() const { return horizon_; }
  double param() const { return param_; }  // H or beta; 0 for tables
  const std::string& description() const { return desc_; }

 private:
  Modulus() = default;

  ModulusFamily family_{};
  double horizon_ = 0.0;
  double param_ = 0.0;
  bool mv_ = false;
  std::string desc_;

  // custom-table state (monotone cubic on eta)
  std::vector<double> xs_, ys_, slopes_;
  double table_eval(double x) const;
  double table_deriv(double x) const;
};

// Exact classification for built-in families (power always holds;
// logarithmic holds iff beta > 1).  Custom tables use a log-log tail-slope
// heuristic on the Fernique integrand over u in [1e3, 1e6] and may return
// Undecided.
FerniqueVerdict fernique_classify(const Modulus& m);

}  // namespace roughldp
