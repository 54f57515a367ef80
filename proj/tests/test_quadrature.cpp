#include <doctest.h>

#include <cmath>

#include "roughldp/quadrature.hpp"

using namespace roughldp;

namespace {
double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}
}  // namespace

TEST_CASE("composite Gauss-Legendre is exact on polynomials") {
  const auto f = [](double x) { return 5 * x * x * x * x - x + 2.0; };
  const double exact = 1.0 - 0.5 + 2.0;  // int_0^1
  CHECK(integrate(f, 0.0, 1.0, 1) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("endpoint substitution handles x^{-1/2}") {
  const double v = integrate_endpoint_singular(
      [](double, double dlo, double) { return 1.0 / std::sqrt(dlo); }, 0.0,
      1.0, -0.5, 0.0, 4);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("two-sided singularity matches the Beta function") {
  // int_0^1 x^{-0.4} (1-x)^{-0.3} dx = B(0.6, 0.7)
  const double v = integrate_endpoint_singular(
      [](double, double dlo, double dhi) {
        return std::pow(dlo, -0.4) * std::pow(dhi, -0.3);
      },
      0.0, 1.0, -0.4, -0.3, 8);
  CHECK(v == doctest::Approx(std::exp(log_beta(0.6, 0.7))).epsilon(1e-10));
}

TEST_CASE("singular integrand with log factor stays accurate") {
  // int_0^{1/2} x^{-1/2} (-log x)^{-1} dx, reference by fine regular quadrature
  const auto f = [](double, double dlo, double) {
    return std::pow(dlo, -0.5) / (-std::log(dlo));
  };
  const double v = integrate_endpoint_singular(f, 0.0, 0.5, -0.5, 0.0, 16);
  double ref = 0.0;  // substitute x = u^2 by hand: 2 int u^0 / (-2 log u) du
  ref = integrate([](double u) { return 2.0 / (-2.0 * std::log(u)); }, 0.0,
                  std::sqrt(0.5), 64);
  CHECK(v == doctest::Approx(ref).epsilon(1e-6));
}
