#include <doctest.h>

#include <cmath>
#include <random>

#include "roughldp/kernel.hpp"
#include "roughldp/modulus.hpp"
#include "roughldp/quadrature.hpp"

using namespace roughldp;

namespace {
double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}
}  // namespace

TEST_CASE("logarithmic modulus domain constraint") {
  // e^{-beta-1} = e^{-3} ~ 0.0498: T = 0.04 valid, T = 0.06 rejected
  CHECK_NOTHROW(Modulus::logarithmic(2.0, 0.04));
  CHECK_THROWS_AS(Modulus::logarithmic(2.0, 0.06), std::invalid_argument);
}

TEST_CASE("power modulus H=1/2 is the Brownian case") {
  const Modulus m = Modulus::power(0.5, 1.0);
  CHECK(m.eta(0.25) == doctest::Approx(0.5));
  CHECK(m.eta_sq_prime(0.9) == doctest::Approx(1.0));
  CHECK(m.mv_admissible());
}

TEST_CASE("power modulus H>1/2 fails the MV monotonicity") {
  CHECK_FALSE(Modulus::power(0.7, 1.0).mv_admissible());
  CHECK(Modulus::power(0.3, 1.0).mv_admissible());
}

TEST_CASE("custom table must be monotone") {
  CHECK_THROWS_AS(
      Modulus::custom_table({0.0, 0.5, 1.0}, {0.0, 0.4, 0.3}, 1.0),
      std::invalid_argument);
}

TEST_CASE("fernique classification on built-in families") {
  CHECK(fernique_classify(Modulus::logarithmic(2.0, 0.04)) ==
        FerniqueVerdict::Holds);
  CHECK(fernique_classify(Modulus::logarithmic(1.0, 0.01)) ==
        FerniqueVerdict::Fails);
  CHECK(fernique_classify(Modulus::power(0.3, 1.0)) == FerniqueVerdict::Holds);
}

TEST_CASE("fernique tail heuristic on custom tables") {
  // a Lipschitz-looking table decays like u^{-2}: clearly holds
  std::vector<double> xs, ys;
  for (int i = 0; i <= 32; ++i) {
    xs.push_back(i / 32.0);
    ys.push_back(i / 32.0 * (2.0 - i / 32.0) * 0.6 + (i > 0 ? 1e-6 : 0.0));
  }
  const Modulus m = Modulus::custom_table(xs, ys, 1.0);
  CHECK(fernique_classify(m) == FerniqueVerdict::Holds);
}

TEST_CASE("riemann_liouville H=1/2 is the unit kernel") {
  const VolterraKernel k = VolterraKernel::riemann_liouville(0.5, 1.0);
  CHECK(k(0.7, 0.3) == doctest::Approx(1.0));
  CHECK(k(0.7, 0.71) == 0.0);
}

TEST_CASE("molchan_golosov H=1/2 routes to brownian") {
  const VolterraKernel k = VolterraKernel::molchan_golosov(0.5, 1.0);
  CHECK(k.family() == KernelFamily::Brownian);
}

TEST_CASE("mv_stationary tau for the logarithmic modulus") {
  // tau_beta^2(x) = beta x^{-1} (-log x)^{-beta-1}; at beta=2, x=e^{-4}:
  // tau^2 = 2 e^4 / 64
  const VolterraKernel k =
      VolterraKernel::mv_stationary(Modulus::logarithmic(2.0, 0.04));
  const double x = std::exp(-4.0);
  const double expect = std::sqrt(2.0 * std::exp(4.0) / 64.0);
  CHECK(k.tau(x) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect == doctest::Approx(1.3062).epsilon(1e-4));
}

TEST_CASE("mv_stationary with power modulus is proportional to Riemann-Liouville") {
  const double h = 0.3;
  const VolterraKernel mv = VolterraKernel::mv_stationary(Modulus::power(h, 1.0));
  const VolterraKernel rl = VolterraKernel::riemann_liouville(h, 1.0);
  const double c = std::sqrt(2.0 * h) * std::tgamma(h + 0.5);
  for (const double d : {0.03, 0.2, 0.77})
    CHECK(mv.tau(d) == doctest::Approx(c * rl.tau(d)).epsilon(1e-12));
}

TEST_CASE("mv_stationary rejects non-admissible moduli") {
  CHECK_THROWS_AS(VolterraKernel::mv_stationary(Modulus::power(0.7, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("molchan_golosov normalization matches the Beta closed form") {
  // H > 1/2: c^2 = H(2H-1)/B(H-1/2, 2-2H); H < 1/2: c^2 = 2H/((1-2H) B(H+1/2, 1-2H))
  {
    const double h = 0.7;
    const VolterraKernel k = VolterraKernel::molchan_golosov(h, 1.0);
    const double b = std::exp(log_beta(h - 0.5, 2.0 - 2.0 * h));
    const double expect = std::sqrt(h * (2.0 * h - 1.0) / b);
    // recover c from K via a mid-domain point against a direct quadrature
    const double t = 0.8, s = 0.5;
    const double inner = integrate_endpoint_singular(
        [&](double u, double dlo, double) {
          return std::pow(dlo, h - 1.5) * std::pow(u, h - 0.5);
        },
        s, t, h - 1.5, 0.0, 16);
    CHECK(k(t, s) ==
          doctest::Approx(expect * std::pow(s, 0.5 - h) * inner).epsilon(1e-9));
  }
  {
    const double h = 0.3;
    const double b = std::exp(log_beta(h + 0.5, 1.0 - 2.0 * h));
    const double expect = std::sqrt(2.0 * h / ((1.0 - 2.0 * h) * b));
    const VolterraKernel k = VolterraKernel::molchan_golosov(h, 1.0);
    const double t = 0.9, s = 0.6;
    const double inner = integrate_endpoint_singular(
        [&](double u, double dlo, double) {
          return std::pow(u, h - 1.5) * std::pow(dlo, h - 0.5);
        },
        s, t, h - 0.5, 0.0, 16);
    const double lead = std::pow(t / s, h - 0.5) * std::pow(t - s, h - 0.5);
    CHECK(k(t, s) == doctest::Approx(expect * (lead - (h - 0.5) *
                                                          std::pow(s, 0.5 - h) *
                                                          inner))
                         .epsilon(1e-9));
  }
}

TEST_CASE("volterra property holds across families") {
  std::mt19937_64 gen(123);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const VolterraKernel kernels[] = {
      VolterraKernel::brownian(1.0),
      VolterraKernel::molchan_golosov(0.3, 1.0),
      VolterraKernel::molchan_golosov(0.7, 1.0),
      VolterraKernel::riemann_liouville(0.4, 1.0),
      VolterraKernel::mv_stationary(Modulus::power(0.3, 1.0))};
  for (const auto& k : kernels) {
    for (int trial = 0; trial < 50; ++trial) {
      const double t = u(gen), s = t + (1.0 - t) * u(gen) + 1e-12;
      CHECK(k(t, s) == 0.0);
    }
  }
}

TEST_CASE("variance function examples") {
  // fBM H=0.3 via Molchan-Golosov at t=0.5: t^{2H} = 0.5^{0.6}
  {
    const VolterraKernel k = VolterraKernel::molchan_golosov(0.3, 1.0);
    const auto v = variance_function(k, {0.5});
    CHECK(v[0] == doctest::Approx(std::pow(0.5, 0.6)).epsilon(2e-4));
    CHECK(std::pow(0.5, 0.6) == doctest::Approx(0.6598).epsilon(1e-4));
  }
  // Riemann-Liouville H=0.3 at t=1: t^{2H} / (2H Gamma(H+1/2)^2)
  {
    const VolterraKernel k = VolterraKernel::riemann_liouville(0.3, 1.0);
    const double g = std::tgamma(0.8);
    const double expect = 1.0 / (0.6 * g * g);
    const auto v = variance_function(k, {1.0});
    CHECK(v[0] == doctest::Approx(expect).epsilon(1e-12));
  }
  // logBm beta=2 at t=0.04: (-log 0.04)^{-2}
  {
    const VolterraKernel k =
        VolterraKernel::mv_stationary(Modulus::logarithmic(2.0, 0.04));
    const auto v = variance_function(k, {0.04});
    const double expect = std::pow(-std::log(0.04), -2.0);
    CHECK(v[0] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect == doctest::Approx(0.0965).epsilon(1e-3));
  }
}

TEST_CASE("stationary identity: quadrature of tau^2 matches eta^2") {
  // substitute x = e^{-y}: int_0^t tau^2 = int_{-log t}^Y beta y^{-beta-1}
  // e^{... } ... the Jacobian cancels the x^{-1} factor exactly, leaving a
  // tail int_Y^infty handled by its closed form Y^{-beta}.
  const Modulus eta = Modulus::logarithmic(2.0, 0.04);
  const VolterraKernel k = VolterraKernel::mv_stationary(eta);
  const double y_cut = 40.0;
  for (const double t : {0.01, 0.02, 0.035}) {
    const double body = integrate(
        [&](double y) {
          const double x = std::exp(-y);
          const double tv = k.tau(x);
          return tv * tv * x;  // dx = -x dy
        },
        -std::log(t), y_cut, 256);
    const double tail = std::pow(y_cut, -2.0);  // int_Y^inf 2 y^{-3} dy
    CHECK(body + tail == doctest::Approx(eta.eta_sq(t)).epsilon(1e-6));
  }
  // power modulus: exact antiderivative equals eta^2 by construction
  const Modulus pw = Modulus::power(0.3, 1.0);
  const VolterraKernel kp = VolterraKernel::mv_stationary(pw);
  CHECK(kp.tau_sq_antiderivative(0.4) == doctest::Approx(pw.eta_sq(0.4)));
}

TEST_CASE("l2 modulus: brownian kernel gives M_K(tau) = tau") {
  const VolterraKernel k = VolterraKernel::brownian(1.0);
  CHECK(l2_modulus(k, 0.25, 16) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(l2_modulus(k, 0.0, 16) == 0.0);
}

TEST_CASE("l2 modulus is non-decreasing in the lag") {
  const VolterraKernel k = VolterraKernel::riemann_liouville(0.3, 1.0);
  double prev = 0.0;
  for (const double lag : {0.125, 0.25, 0.5, 1.0}) {
    const double m = l2_modulus(k, lag, 8);
    CHECK(m >= prev - 1e-12);
    prev = m;
  }
  // envelope shape: below the (b_H tau^{2H})-type power bound scaled at tau=1
  const double at1 = l2_modulus(k, 1.0, 8);
  const double at01 = l2_modulus(k, 0.125, 8);
  CHECK(at01 <= at1 * std::pow(0.125, 2.0 * 0.3) * 1.5);
}
