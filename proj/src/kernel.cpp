#include "roughldp/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "roughldp/quadrature.hpp"

namespace roughldp {

namespace {

double gamma_fn(double x) { return std::tgamma(x); }

}  // namespace

VolterraKernel VolterraKernel::brownian(double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("brownian kernel: T > 0 required");
  VolterraKernel k;
  k.family_ = KernelFamily::Brownian;
  k.horizon_ = horizon;
  k.hurst_ = 0.5;
  k.stationary_ = true;
  k.has_tau_antideriv_ = true;
  k.desc_ = "brownian";
  return k;
}

VolterraKernel VolterraKernel::molchan_golosov(double hurst, double horizon) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw std::invalid_argument("molchan_golosov: H must be in (0,1)");
  if (hurst == 0.5) return brownian(horizon);
  if (!(horizon > 0.0)) throw std::invalid_argument("molchan_golosov: T > 0 required");
  VolterraKernel k;
  k.family_ = KernelFamily::MolchanGolosov;
  k.horizon_ = horizon;
  k.hurst_ = hurst;
  k.diag_exp_ = std::min(hurst - 0.5, 0.0);
  k.zero_exp_ = -std::fabs(hurst - 0.5);
  if (hurst > 0.5) {
    // B1 = int_0^1 (1-x)^{1-2H} x^{H-3/2} dx,  c = sqrt(H(2H-1)/B1)
    const double b1 = integrate_endpoint_singular(
        [&](double, double dlo, double dhi) {
          return std::pow(dhi, 1.0 - 2.0 * hurst) * std::pow(dlo, hurst - 1.5);
        },
        0.0, 1.0, hurst - 1.5, 1.0 - 2.0 * hurst, 8);
    k.norm_const_ = std::sqrt(hurst * (2.0 * hurst - 1.0) / b1);
  } else {
    // B2 = int_0^1 (1-x)^{-2H} x^{H-1/2} dx,  c = sqrt(2H/((1-2H) B2))
    const double b2 = integrate_endpoint_singular(
        [&](double, double dlo, double dhi) {
          return std::pow(dhi, -2.0 * hurst) * std::pow(dlo, hurst - 0.5);
        },
        0.0, 1.0, hurst - 0.5, -2.0 * hurst, 8);
    k.norm_const_ = std::sqrt(2.0 * hurst / ((1.0 - 2.0 * hurst) * b2));
  }
  k.desc_ = "molchan_golosov(H=" + std::to_string(hurst) + ")";
  return k;
}

VolterraKernel VolterraKernel::riemann_liouville(double hurst, double horizon) {
  if (!(hurst > 0.0)) throw std::invalid_argument("riemann_liouville: H > 0 required");
  if (!(horizon > 0.0)) throw std::invalid_argument("riemann_liouville: T > 0 required");
  VolterraKernel k;
  k.family_ = KernelFamily::RiemannLiouville;
  k.horizon_ = horizon;
  k.hurst_ = hurst;
  k.stationary_ = true;
  k.has_tau_antideriv_ = true;
  k.diag_exp_ = std::min(hurst - 0.5, 0.0);
  k.desc_ = "riemann_liouville(H=" + std::to_string(hurst) + ")";
  return k;
}

VolterraKernel VolterraKernel::mv_stationary(const Modulus& m) {
  if (!m.mv_admissible())
    throw std::invalid_argument(
        "mv_stationary: modulus fails the MV condition ((eta^2)' positive "
        "non-increasing)");
  VolterraKernel k;
  k.family_ = KernelFamily::MvStationary;
  k.horizon_ = m.horizon();
  k.hurst_ = m.family() == ModulusFamily::Power ? m.param() : 0.0;
  k.stationary_ = true;
  k.modulus_ = m;
  k.has_tau_antideriv_ = m.family() == ModulusFamily::Power;
  switch (m.family()) {
    case ModulusFamily::Power:
      k.diag_exp_ = m.param() - 0.5;
      break;
    case ModulusFamily::Logarithmic:
      k.diag_exp_ = -0.5;
      break;
    case ModulusFamily::CustomTable: {
      // estimate the tau singularity exponent from a log-log probe near 0
      const double x1 = m.horizon() * 1e-6, x2 = m.horizon() * 1e-3;
      const double t1 = std::sqrt(m.eta_sq_prime(x1));
      const double t2 = std::sqrt(m.eta_sq_prime(x2));
      double slope = (std::log(t2) - std::log(t1)) / (std::log(x2) - std::log(x1));
      k.diag_exp_ = std::min(0.0, std::max(-0.5, slope));
      break;
    }
  }
  k.desc_ = "mv_stationary(" + m.description() + ")";
  return k;
}

VolterraKernel VolterraKernel::custom(std::function<double(double, double)> eval,
                                      double horizon, double diag_exponent,
                                      double zero_exponent,
                                      std::string description) {
  if (!(horizon > 0.0)) throw std::invalid_argument("custom kernel: T > 0 required");
  VolterraKernel k;
  k.family_ = KernelFamily::Custom;
  k.horizon_ = horizon;
  k.custom_eval_ = std::move(eval);
  k.diag_exp_ = diag_exponent;
  k.zero_exp_ = zero_exponent;
  k.desc_ = std::move(description);
  return k;
}

double VolterraKernel::tau(double x) const {
  if (!stationary_) throw std::logic_error("tau: kernel is not stationary");
  if (x <= 0.0) return 0.0;
  switch (family_) {
    case KernelFamily::Brownian:
      return 1.0;
    case KernelFamily::RiemannLiouville:
      return std::pow(x, hurst_ - 0.5) / gamma_fn(hurst_ + 0.5);
    case KernelFamily::MvStationary:
      return std::sqrt(modulus_->eta_sq_prime(x));
    default:
      throw std::logic_error("tau: unexpected family");
  }
}

double VolterraKernel::tau_sq_antiderivative(double x) const {
  if (!stationary_) throw std::logic_error("tau_sq_antiderivative: not stationary");
  if (x <= 0.0) return 0.0;
  switch (family_) {
    case KernelFamily::Brownian:
      return x;
    case KernelFamily::RiemannLiouville: {
      const double g = gamma_fn(hurst_ + 0.5);
      return std::pow(x, 2.0 * hurst_) / (2.0 * hurst_ * g * g);
    }
    case KernelFamily::MvStationary:
      return modulus_->eta_sq(x);
    default:
      throw std::logic_error("tau_sq_antiderivative: unexpected family");
  }
}

double VolterraKernel::tau_antiderivative(double x) const {
  if (!has_tau_antideriv_)
    throw std::logic_error("tau_antiderivative: not available for this kernel");
  if (x <= 0.0) return 0.0;
  switch (family_) {
    case KernelFamily::Brownian:
      return x;
    case KernelFamily::RiemannLiouville:
      return std::pow(x, hurst_ + 0.5) / ((hurst_ + 0.5) * gamma_fn(hurst_ + 0.5));
    case KernelFamily::MvStationary:
      // power modulus: tau = sqrt(2H) x^{H-1/2}
      return std::sqrt(2.0 * hurst_) * std::pow(x, hurst_ + 0.5) / (hurst_ + 0.5);
    default:
      throw std::logic_error("tau_antiderivative: unexpected family");
  }
}

double VolterraKernel::operator()(double t, double s) const {
  if (s >= t || s < 0.0 || t <= 0.0) return 0.0;
  return eval_gap(t, t - s);
}

double VolterraKernel::eval_gap(double t, double gap) const {
  if (gap <= 0.0 || gap > t || t <= 0.0) return 0.0;
  switch (family_) {
    case KernelFamily::Brownian:
      return 1.0;
    case KernelFamily::RiemannLiouville:
    case KernelFamily::MvStationary:
      return tau(gap);
    case KernelFamily::Custom:
      return custom_eval_(t, t - gap);
    case KernelFamily::MolchanGolosov:
      break;
  }
  const double h = hurst_;
  const double s = t - gap;
  if (s <= 0.0) return 0.0;
  // inner integral int_s^t (u-s)^{p} u^{q} du in geometric pieces: the first
  // piece absorbs the u=s singularity by substitution, later pieces double in
  // width so the u^{q} scale variation stays bounded per piece
  const auto inner_integral = [&](double p, double q) {
    double total = 0.0;
    double a = s;
    bool first = true;
    while (a < t) {
      const double b = std::min(t, first ? 2.0 * s : 2.0 * a);
      if (first) {
        total += integrate_endpoint_singular(
            [&](double u, double dlo, double) {
              return std::pow(dlo, p) * std::pow(u, q);
            },
            a, b, p, 0.0, 2);
      } else {
        total += integrate(
            [&](double u) { return std::pow(u - s, p) * std::pow(u, q); }, a,
            b, 2);
      }
      first = false;
      a = b;
    }
    return total;
  };
  if (h > 0.5) {
    // c s^{1/2-H} int_s^t (u-s)^{H-3/2} u^{H-1/2} du
    return norm_const_ * std::pow(s, 0.5 - h) * inner_integral(h - 1.5, h - 0.5);
  }
  // c [(t/s)^{H-1/2} gap^{H-1/2} - (H-1/2) s^{1/2-H} int_s^t u^{H-3/2}(u-s)^{H-1/2} du]
  const double lead = std::pow(t / s, h - 0.5) * std::pow(gap, h - 0.5);
  return norm_const_ *
         (lead - (h - 0.5) * std::pow(s, 0.5 - h) * inner_integral(h - 0.5, h - 1.5));
}

double l2_modulus(const VolterraKernel& kernel, double lag,
                  int grid_resolution) {
  if (lag <= 0.0) return 0.0;
  const double T = kernel.horizon();
  if (lag > T) throw std::invalid_argument("l2_modulus: lag must be in (0,T]");
  const int n = std::max(2, grid_resolution);
  const double dt = T / n;
  // delta^2(t,s) = V(t) + V(s) - 2 C(t,s), one quadrature per pair
  std::vector<double> times(n + 1);
  for (int i = 0; i <= n; ++i) times[i] = T * i / n;
  const std::vector<double> var = variance_function(kernel, times);
  const int max_k = static_cast<int>(std::floor(lag / dt + 1e-9));
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n && j - i <= max_k; ++j) {
      const double ti = times[i], tj = times[j];
      double cij = 0.0;
      if (i > 0) {
        cij = integrate_endpoint_singular(
            [&](double u, double, double dhi) {
              return kernel.eval_gap(ti, dhi) * kernel(tj, u);
            },
            0.0, ti, 2.0 * kernel.zero_exponent(), kernel.diag_exponent(),
            std::max(2, 2 * i));
      }
      const double d2 = var[i] + var[j] - 2.0 * cij;
      best = std::max(best, d2);
    }
  }
  return best;
}

std::vector<double> variance_function(const VolterraKernel& kernel,
                                      const std::vector<double>& times) {
  std::vector<double> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t <= 0.0) {
      out[i] = 0.0;
    } else if (t > kernel.horizon() * (1.0 + 1e-12)) {
      throw std::invalid_argument("variance_function: time beyond kernel horizon");
    } else if (kernel.stationary()) {
      out[i] = kernel.tau_sq_antiderivative(t);
    } else {
      out[i] = integrate_endpoint_singular(
          [&](double, double, double dhi) {
            const double v = kernel.eval_gap(t, dhi);
            return v * v;
          },
          0.0, t, 2.0 * kernel.zero_exponent(),
          std::max(-0.999, 2.0 * kernel.diag_exponent()), 8);
    }
  }
  return out;
}

}  // namespace roughldp
