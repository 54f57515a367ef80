#include "roughldp/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace roughldp {

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1,1].
constexpr double kNodes[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};
constexpr double kWeights[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

template <typename F>
double gl16(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int k = 0; k < 16; ++k) acc += kWeights[k] * f(mid + half * kNodes[k]);
  return acc * half;
}

template <typename F>
double composite(const F& f, double a, double b, int cells) {
  if (b <= a) return 0.0;
  if (cells < 1) cells = 1;
  const double h = (b - a) / cells;
  double acc = 0.0;
  for (int c = 0; c < cells; ++c) acc += gl16(f, a + c * h, a + (c + 1) * h);
  return acc;
}

}  // namespace

double integrate(const Integrand& f, double a, double b, int cells) {
  return composite(f, a, b, cells);
}

double integrate_endpoint_singular(const EndpointAwareIntegrand& f, double a,
                                   double b, double alpha_lo, double alpha_hi,
                                   int cells) {
  if (b <= a) return 0.0;
  if (alpha_lo <= -1.0 || alpha_lo > 0.0 || alpha_hi <= -1.0 || alpha_hi > 0.0)
    throw std::invalid_argument("singularity exponent must be in (-1,0]");
  const double width = b - a;
  const double half_width = 0.5 * width;
  double acc = 0.0;
  // left half: distance to a is exact (= v^q under the substitution)
  if (alpha_lo == 0.0) {
    acc += composite([&](double d) { return f(a + d, d, width - d); }, 0.0,
                     half_width, cells);
  } else {
    const double q = 1.0 / (1.0 + alpha_lo);
    acc += composite(
        [&](double v) {
          const double d = std::pow(v, q);
          return f(a + d, d, width - d) * q * std::pow(v, q - 1.0);
        },
        0.0, std::pow(half_width, 1.0 + alpha_lo), cells);
  }
  // right half: distance to b is exact
  if (alpha_hi == 0.0) {
    acc += composite([&](double d) { return f(b - d, width - d, d); }, 0.0,
                     half_width, cells);
  } else {
    const double q = 1.0 / (1.0 + alpha_hi);
    acc += composite(
        [&](double v) {
          const double d = std::pow(v, q);
          return f(b - d, width - d, d) * q * std::pow(v, q - 1.0);
        },
        0.0, std::pow(half_width, 1.0 + alpha_hi), cells);
  }
  return acc;
}

}  // namespace roughldp
