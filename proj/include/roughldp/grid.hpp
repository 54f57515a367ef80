#pragma once

#include <stdexcept>

namespace roughldp {

// Uniform time grid t_i = i T / n, i = 0..n.
struct Grid {
  double horizon = 0.0;
  int steps = 0;

  Grid() = default;
  Grid(double T, int n) : horizon(T), steps(n) {
    if (!(T > 0.0) || n < 2)
      throw std::invalid_argument("grid: requires T > 0 and n >= 2");
  }

  double dt() const { return horizon / steps; }
  double time(int i) const { return horizon * i / steps; }
  int points() const { return steps + 1; }
};

}  // namespace roughldp
