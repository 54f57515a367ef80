#include "roughldp/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roughldp {

namespace {

// Fritsch-Carlson monotone cubic slopes.
std::vector<double> pchip_slopes(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), delta(n - 1), d(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  d[0] = delta[0];
  d[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  // clamp endpoints to preserve monotonicity
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) continue;
    const double a = d[i] / delta[i];
    const double b = d[i + 1] / delta[i];
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double t = 3.0 / std::sqrt(s);
      d[i] = t * a * delta[i];
      d[i + 1] = t * b * delta[i];
    }
  }
  return d;
}

}  // namespace

Modulus Modulus::power(double hurst, double horizon) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw std::invalid_argument("power modulus: H must be in (0,1)");
  if (!(horizon > 0.0))
    throw std::invalid_argument("power modulus: T must be positive");
  Modulus m;
  m.family_ = ModulusFamily::Power;
  m.horizon_ = horizon;
  m.param_ = hurst;
  // (eta^2)' = 2H x^{2H-1}: positive, non-increasing iff H <= 1/2
  m.mv_ = hurst <= 0.5;
  m.desc_ = "power(H=" + std::to_string(hurst) + ")";
  return m;
}

Modulus Modulus::logarithmic(double beta, double horizon) {
  if (!(beta > 0.0))
    throw std::invalid_argument("logarithmic modulus: beta must be positive");
  const double tmax = std::exp(-beta - 1.0);
  if (!(horizon > 0.0 && horizon < tmax))
    throw std::invalid_argument(
        "logarithmic modulus: requires 0 < T < exp(-beta-1) = " +
        std::to_string(tmax));
  Modulus m;
  m.family_ = ModulusFamily::Logarithmic;
  m.horizon_ = horizon;
  m.param_ = beta;
  m.mv_ = true;  // non-increasing (eta^2)' exactly on (0, e^{-beta-1})
  m.desc_ = "logarithmic(beta=" + std::to_string(beta) + ")";
  return m;
}

Modulus Modulus::custom_table(std::vector<double> xs, std::vector<double> etas,
                              double horizon) {
  if (xs.size() != etas.size() || xs.size() < 3)
    throw std::invalid_argument("custom modulus: need >= 3 matching samples");
  if (xs.front() != 0.0 || etas.front() != 0.0)
    throw std::invalid_argument("custom modulus: table must start at (0,0)");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i + 1] > xs[i]) || !(etas[i + 1] > etas[i]))
      throw std::invalid_argument("custom modulus: table must be strictly increasing");
  }
  if (!(horizon > 0.0 && horizon <= xs.back()))
    throw std::invalid_argument("custom modulus: T must lie within the table");
  Modulus m;
  m.family_ = ModulusFamily::CustomTable;
  m.horizon_ = horizon;
  m.xs_ = std::move(xs);
  m.ys_ = std::move(etas);
  m.slopes_ = pchip_slopes(m.xs_, m.ys_);
  m.desc_ = "custom_table(" + std::to_string(m.xs_.size()) + " pts)";
  // probe (eta^2)' for positivity and monotone decrease
  m.mv_ = true;
  const int probe = 256;
  double prev = 0.0;
  for (int k = 1; k <= probe && m.mv_; ++k) {
    const double x = m.horizon_ * k / (probe + 1.0);
    const double p = m.eta_sq_prime(x);
    if (!(p > 0.0) || (k > 1 && p > prev * (1.0 + 1e-9))) m.mv_ = false;
    prev = p;
  }
  return m;
}

double Modulus::table_eval(double x) const {
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = (it == xs_.begin()) ? 0 : (it - xs_.begin() - 1);
  if (i >= xs_.size() - 1) i = xs_.size() - 2;
  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * ys_[i] + h10 * h * slopes_[i] + h01 * ys_[i + 1] +
         h11 * h * slopes_[i + 1];
}

double Modulus::table_deriv(double x) const {
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = (it == xs_.begin()) ? 0 : (it - xs_.begin() - 1);
  if (i >= xs_.size() - 1) i = xs_.size() - 2;
  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  const double dh00 = 6 * t * (t - 1) / h;
  const double dh10 = (1 - t) * (1 - 3 * t);
  const double dh01 = -6 * t * (t - 1) / h;
  const double dh11 = t * (3 * t - 2);
  return dh00 * ys_[i] + dh10 * slopes_[i] + dh01 * ys_[i + 1] +
         dh11 * slopes_[i + 1];
}

double Modulus::eta(double x) const {
  if (x <= 0.0) return 0.0;
  switch (family_) {
    case ModulusFamily::Power:
      return std::pow(x, param_);
    case ModulusFamily::Logarithmic:
      return std::pow(-std::log(x), -0.5 * param_);
    case ModulusFamily::CustomTable:
      return table_eval(x);
  }
  return 0.0;
}

double Modulus::eta_sq(double x) const {
  if (x <= 0.0) return 0.0;
  switch (family_) {
    case ModulusFamily::Power:
      return std::pow(x, 2.0 * param_);
    case ModulusFamily::Logarithmic:
      return std::pow(-std::log(x), -param_);
    case ModulusFamily::CustomTable: {
      const double e = table_eval(x);
      return e * e;
    }
  }
  return 0.0;
}

double Modulus::eta_sq_prime(double x) const {
  if (x <= 0.0) throw std::domain_error("eta_sq_prime: x must be positive");
  switch (family_) {
    case ModulusFamily::Power:
      return 2.0 * param_ * std::pow(x, 2.0 * param_ - 1.0);
    case ModulusFamily::Logarithmic:
      // (eta_beta^2)'(x) = beta x^{-1} (-log x)^{-beta-1}
      return param_ / x * std::pow(-std::log(x), -param_ - 1.0);
    case ModulusFamily::CustomTable:
      return 2.0 * table_eval(x) * table_deriv(x);
  }
  return 0.0;
}

FerniqueVerdict fernique_classify(const Modulus& m) {
  switch (m.family()) {
    case ModulusFamily::Power:
      return FerniqueVerdict::Holds;
    case ModulusFamily::Logarithmic:
      return m.param() > 1.0 ? FerniqueVerdict::Holds : FerniqueVerdict::Fails;
    case ModulusFamily::CustomTable:
      break;
  }
  // Tail-slope test on g(u) = eta(1/u) (log u)^{-1/2} / u over u in [1e3,1e6].
  // Convergence of the Fernique integral needs g to decay faster than 1/u;
  // truncated sampling cannot prove it, hence the Undecided band.
  const int pts = 13;
  std::vector<double> lu(pts), lg(pts);
  for (int k = 0; k < pts; ++k) {
    const double e = 3.0 + 3.0 * k / (pts - 1.0);  // log10 u
    const double u = std::pow(10.0, e);
    const double arg = std::min(1.0 / u, m.horizon());
    const double g = m.eta(arg) * std::pow(std::log(u), -0.5) / u;
    if (!(g > 0.0)) return FerniqueVerdict::Holds;  // modulus vanishes: trivial
    lu[k] = std::log(u);
    lg[k] = std::log(g);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < pts; ++k) {
    sx += lu[k];
    sy += lg[k];
    sxx += lu[k] * lu[k];
    sxy += lu[k] * lg[k];
  }
  const double slope = (pts * sxy - sx * sy) / (pts * sxx - sx * sx);
  const double margin = 0.05;
  if (slope < -1.0 - margin) return FerniqueVerdict::Holds;
  if (slope > -1.0 + margin) return FerniqueVerdict::Fails;
  return FerniqueVerdict::Undecided;
}

}  // namespace roughldp
