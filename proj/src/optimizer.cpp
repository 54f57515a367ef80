#include "roughldp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "roughldp/parallel.hpp"
#include "roughldp/rng.hpp"

namespace roughldp {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

void ObjectiveFn::gradient(const std::vector<double>& x,
                           std::vector<double>& grad) const {
  std::vector<double> xp = x;
  grad.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double h = 6e-6 * (1.0 + std::fabs(x[k]));
    xp[k] = x[k] + h;
    const double fp = value(xp);
    xp[k] = x[k] - h;
    const double fm = value(xp);
    xp[k] = x[k];
    grad[k] = (fp - fm) / (2.0 * h);
  }
}

LocalResult lbfgs_minimize(const ObjectiveFn& fn, std::vector<double> x0,
                           const LocalOptions& opts) {
  const std::size_t n = x0.size();
  LocalResult res;
  res.x = std::move(x0);
  res.value = fn.value(res.x);

  std::vector<double> grad(n), grad_new(n), dir(n), x_new(n);
  fn.gradient(res.x, grad);
  res.grad_norm = norm2(grad);

  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;

  for (res.iterations = 0; res.iterations < opts.max_iterations;
       ++res.iterations) {
    if (res.grad_norm <= opts.grad_tol) {
      res.converged = true;
      return res;
    }
    // two-loop recursion
    dir = grad;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho_hist[i] * dot(s_hist[i], dir);
      for (std::size_t k = 0; k < n; ++k) dir[k] -= alpha[i] * y_hist[i][k];
    }
    if (!s_hist.empty()) {
      const double gamma = dot(s_hist.back(), y_hist.back()) /
                           std::max(dot(y_hist.back(), y_hist.back()), 1e-300);
      for (auto& d : dir) d *= gamma;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * dot(y_hist[i], dir);
      for (std::size_t k = 0; k < n; ++k)
        dir[k] += (alpha[i] - beta) * s_hist[i][k];
    }
    for (auto& d : dir) d = -d;
    double slope = dot(grad, dir);
    if (!(slope < 0.0)) {  // fall back to steepest descent
      for (std::size_t k = 0; k < n; ++k) dir[k] = -grad[k];
      slope = -res.grad_norm * res.grad_norm;
    }

    // Armijo backtracking
    double step = 1.0;
    bool stepped = false;
    for (int bt = 0; bt < 50; ++bt) {
      for (std::size_t k = 0; k < n; ++k) x_new[k] = res.x[k] + step * dir[k];
      const double f_new = fn.value(x_new);
      if (std::isfinite(f_new) && f_new <= res.value + 1e-4 * step * slope) {
        stepped = true;
        break;
      }
      step *= 0.5;
    }
    if (!stepped) return res;  // stuck; best point reported, not converged

    fn.gradient(x_new, grad_new);
    std::vector<double> s(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = x_new[k] - res.x[k];
      y[k] = grad_new[k] - grad[k];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12 * norm2(s) * norm2(y)) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    res.x = x_new;
    res.value = fn.value(res.x);
    grad = grad_new;
    res.grad_norm = norm2(grad);
  }
  res.converged = res.grad_norm <= opts.grad_tol;
  return res;
}

MultistartResult multistart_minimize(const ObjectiveFn& fn, int dim,
                                     const MultistartOptions& opts) {
  std::vector<std::vector<double>> starts;
  if (opts.include_zero_start) starts.emplace_back(dim, 0.0);
  const CounterRng rng(opts.seed);
  for (int s = 0; s < opts.random_starts; ++s) {
    std::vector<double> x(dim);
    for (int k = 0; k < dim; ++k)
      x[k] = opts.start_scale * rng.normal(s, k, kStreamOptimizer);
    starts.push_back(std::move(x));
  }
  for (const auto& w : opts.extra_starts)
    if (static_cast<int>(w.size()) == dim) starts.push_back(w);

  std::vector<LocalResult> results(starts.size());
  parallel_blocks(starts.size(), 1, opts.workers,
                  [&](std::size_t lo, std::size_t hi) {
                    for (std::size_t i = lo; i < hi; ++i)
                      results[i] = lbfgs_minimize(fn, starts[i], opts.local);
                  });

  MultistartResult out;
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].value < results[best].value) best = i;
  out.best = results[best];
  out.start_values.reserve(results.size());
  for (const auto& r : results) out.start_values.push_back(r.value);
  const double tol = 0.01 * std::max(std::fabs(out.best.value), 1e-12);
  for (const auto& r : results)
    if (r.value - out.best.value <= tol) ++out.starts_agreeing;
  return out;
}

}  // namespace roughldp
