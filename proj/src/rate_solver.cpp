#include "roughldp/rate_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roughldp/covariance.hpp"
#include "roughldp/linalg.hpp"
#include "roughldp/optimizer.hpp"

namespace roughldp {

namespace {

constexpr double kLambdaFloor = 1e-12;

}  // namespace

std::vector<double> DiscretePath::values() const {
  const double dt = grid.dt();
  std::vector<double> v(grid.points(), 0.0);
  for (int j = 1; j <= grid.steps; ++j) v[j] = v[j - 1] + f_dot[j - 1] * dt;
  return v;
}

double DiscretePath::energy() const {
  double e = 0.0;
  for (const double d : f_dot) e += d * d;
  return 0.5 * e * grid.dt();
}

std::vector<double> volterra_hat(const std::vector<double>& f_dot,
                                 const VolterraKernel& kernel,
                                 const Grid& grid) {
  if (static_cast<int>(f_dot.size()) != grid.steps)
    throw std::invalid_argument("volterra_hat: f_dot size must equal grid.steps");
  const std::vector<double> w = cell_integral_matrix(kernel, grid);
  const int n = grid.steps;
  std::vector<double> out(grid.points(), 0.0);
  for (int j = 1; j <= n; ++j) {
    double acc = 0.0;
    const double* wj = &w[static_cast<std::size_t>(j) * n];
    for (int i = 0; i < j; ++i) acc += wj[i] * f_dot[i];
    out[j] = acc;
  }
  return out;
}

namespace {

// Shared state for cell-structured objectives: fhat at the left points
// t_0..t_{n-1} (strictly lower-triangular weights, so component k of f_dot
// only influences fhat at indices > k; the finite-difference gradients
// exploit this by re-evaluating suffixes).
struct HatWeights {
  int n = 0;
  std::vector<double> w;  // (n+1) x n cell integrals

  HatWeights(const VolterraKernel& kernel, const Grid& grid)
      : n(grid.steps), w(cell_integral_matrix(kernel, grid)) {}

  double at(int j, int i) const { return w[static_cast<std::size_t>(j) * n + i]; }

  void left_point_hat(const std::vector<double>& f_dot,
                      std::vector<double>& fhat) const {
    fhat.assign(n, 0.0);
    for (int i = 1; i < n; ++i) {
      double acc = 0.0;
      for (int k = 0; k < i; ++k) acc += at(i, k) * f_dot[k];
      fhat[i] = acc;
    }
  }
};

class QtObjective final : public ObjectiveFn {
 public:
  QtObjective(std::vector<double> g_dot, const ModelSpec& model,
              const Grid& grid, const HatWeights& weights)
      : g_dot_(std::move(g_dot)),
        model_(model),
        grid_(grid),
        w_(weights),
        dt_(grid.dt()) {}

  double cell_cost(int i, double fhat_i, double fdot_i) const {
    const double t = grid_.time(i);
    const double sig = model_.vol(t, fhat_i);
    if (!(sig > 0.0))
      throw std::runtime_error("qt_rate: non-positive volatility encountered");
    const double resid =
        (g_dot_[i] - model_.drift(t, fhat_i) - model_.rho * sig * fdot_i) /
        (model_.rho_bar() * sig);
    return 0.5 * (resid * resid + fdot_i * fdot_i) * dt_;
  }

  double value(const std::vector<double>& x) const override {
    std::vector<double> fhat;
    w_.left_point_hat(x, fhat);
    double total = 0.0;
    for (int i = 0; i < w_.n; ++i) total += cell_cost(i, fhat[i], x[i]);
    return total;
  }

  void gradient(const std::vector<double>& x,
                std::vector<double>& grad) const override {
    const int n = w_.n;
    std::vector<double> fhat;
    w_.left_point_hat(x, fhat);
    std::vector<double> cost(n);
    std::vector<double> suffix(n + 1, 0.0);
    for (int i = 0; i < n; ++i) cost[i] = cell_cost(i, fhat[i], x[i]);
    for (int i = n; i-- > 0;) suffix[i] = suffix[i + 1] + cost[i];
    const double base = suffix[0];
    grad.resize(n);
    for (int k = 0; k < n; ++k) {
      const double h = 6e-6 * (1.0 + std::fabs(x[k]));
      double vals[2];
      for (int s = 0; s < 2; ++s) {
        const double fk = x[k] + (s == 0 ? h : -h);
        const double dh = fk - x[k];
        double tail = cell_cost(k, fhat[k], fk);
        for (int i = k + 1; i < n; ++i)
          tail += cell_cost(i, fhat[i] + dh * w_.at(i, k), x[i]);
        vals[s] = base - suffix[k] + tail;
      }
      grad[k] = (vals[0] - vals[1]) / (2.0 * h);
    }
  }

  std::vector<double> implied_l_dot(const std::vector<double>& x) const {
    std::vector<double> fhat, out(w_.n);
    w_.left_point_hat(x, fhat);
    for (int i = 0; i < w_.n; ++i) {
      const double t = grid_.time(i);
      const double sig = model_.vol(t, fhat[i]);
      out[i] = (g_dot_[i] - model_.drift(t, fhat[i]) - model_.rho * sig * x[i]) /
               (model_.rho_bar() * sig);
    }
    return out;
  }

 private:
  std::vector<double> g_dot_;
  const ModelSpec& model_;
  const Grid& grid_;
  const HatWeights& w_;
  double dt_;
};

// Terminal objective shared by I_T and the L2 branch of Ihat_T:
//   (x - A)^2 / (2 rho_bar^2 S) + E/2,
//   A = sum (b + rho sigma f') dt, S = sum sigma^2 dt, E = sum f'^2 dt.
class TerminalObjective final : public ObjectiveFn {
 public:
  TerminalObjective(double x, const ModelSpec& model, const Grid& grid,
                    const HatWeights& weights)
      : x_(x), model_(model), grid_(grid), w_(weights), dt_(grid.dt()) {}

  struct Cell {
    double a, s, e;
  };

  Cell cell(int i, double fhat_i, double fdot_i) const {
    const double t = grid_.time(i);
    const double sig = model_.vol(t, fhat_i);
    return {(model_.drift(t, fhat_i) + model_.rho * sig * fdot_i) * dt_,
            sig * sig * dt_, fdot_i * fdot_i * dt_};
  }

  double combine(double a, double s, double e) const {
    const double rb2 = model_.rho_bar() * model_.rho_bar();
    const double denom = std::max(s, kLambdaFloor);
    const double diff = x_ - a;
    return diff * diff / (2.0 * rb2 * denom) + 0.5 * e;
  }

  double value(const std::vector<double>& x) const override {
    std::vector<double> fhat;
    w_.left_point_hat(x, fhat);
    double a = 0.0, s = 0.0, e = 0.0;
    for (int i = 0; i < w_.n; ++i) {
      const Cell c = cell(i, fhat[i], x[i]);
      a += c.a;
      s += c.s;
      e += c.e;
    }
    return combine(a, s, e);
  }

  void gradient(const std::vector<double>& x,
                std::vector<double>& grad) const override {
    const int n = w_.n;
    std::vector<double> fhat;
    w_.left_point_hat(x, fhat);
    std::vector<Cell> cells(n);
    std::vector<double> sa(n + 1, 0.0), ss(n + 1, 0.0), se(n + 1, 0.0);
    for (int i = 0; i < n; ++i) cells[i] = cell(i, fhat[i], x[i]);
    for (int i = n; i-- > 0;) {
      sa[i] = sa[i + 1] + cells[i].a;
      ss[i] = ss[i + 1] + cells[i].s;
      se[i] = se[i + 1] + cells[i].e;
    }
    grad.resize(n);
    for (int k = 0; k < n; ++k) {
      const double h = 6e-6 * (1.0 + std::fabs(x[k]));
      double vals[2];
      for (int s = 0; s < 2; ++s) {
        const double fk = x[k] + (s == 0 ? h : -h);
        const double dh = fk - x[k];
        double ta = 0.0, ts = 0.0, te = 0.0;
        {
          const Cell c = cell(k, fhat[k], fk);
          ta += c.a;
          ts += c.s;
          te += c.e;
        }
        for (int i = k + 1; i < n; ++i) {
          const Cell c = cell(i, fhat[i] + dh * w_.at(i, k), x[i]);
          ta += c.a;
          ts += c.s;
          te += c.e;
        }
        vals[s] = combine(sa[0] - sa[k] + ta, ss[0] - ss[k] + ts,
                          se[0] - se[k] + te);
      }
      grad[k] = (vals[0] - vals[1]) / (2.0 * h);
    }
  }

  // (A, S) at a point; used for the L1-proximal flag and the implied control.
  void aggregates(const std::vector<double>& x, double* a_out,
                  double* s_out) const {
    std::vector<double> fhat;
    w_.left_point_hat(x, fhat);
    double a = 0.0, s = 0.0;
    for (int i = 0; i < w_.n; ++i) {
      const Cell c = cell(i, fhat[i], x[i]);
      a += c.a;
      s += c.s;
    }
    *a_out = a;
    *s_out = s;
  }

  std::vector<double> implied_l_dot(const std::vector<double>& x) const {
    double a, s;
    aggregates(x, &a, &s);
    std::vector<double> fhat, out(w_.n);
    w_.left_point_hat(x, fhat);
    const double denom = std::max(s, kLambdaFloor);
    for (int i = 0; i < w_.n; ++i) {
      const double sig = model_.vol(grid_.time(i), fhat[i]);
      out[i] = (x_ - a) * sig / (model_.rho_bar() * denom);
    }
    return out;
  }

 private:
  double x_;
  const ModelSpec& model_;
  const Grid& grid_;
  const HatWeights& w_;
  double dt_;
};

MultistartOptions to_multistart(const SolverOptions& opts, int dim,
                                bool include_zero) {
  MultistartOptions mo;
  mo.random_starts = opts.random_starts;
  mo.include_zero_start = include_zero;
  mo.start_scale = opts.start_scale;
  mo.seed = opts.seed;
  mo.workers = opts.workers;
  mo.local.grad_tol = opts.grad_tol;
  mo.local.max_iterations = opts.max_iterations;
  if (!opts.warm_start.empty() &&
      static_cast<int>(opts.warm_start.size()) == dim)
    mo.extra_starts.push_back(opts.warm_start);
  return mo;
}

RateResult from_multistart(const MultistartResult& ms) {
  RateResult r;
  r.value = std::max(0.0, ms.best.value);
  r.f_dot = ms.best.x;
  r.converged = ms.best.converged;
  r.iterations = ms.best.iterations;
  r.grad_norm = ms.best.grad_norm;
  r.starts_agreeing = ms.starts_agreeing;
  r.start_values = ms.start_values;
  return r;
}

void check_grid_model(const ModelSpec& model, const Grid& grid,
                      const char* who) {
  if (std::fabs(grid.horizon - model.horizon) > 1e-12 * model.horizon)
    throw std::invalid_argument(std::string(who) + ": grid/model horizon mismatch");
}

}  // namespace

RateResult qt_rate(const std::vector<double>& g_values, const ModelSpec& model,
                   const Grid& grid, const SolverOptions& opts) {
  check_grid_model(model, grid, "qt_rate");
  if (!model.vol.strictly_positive())
    throw std::invalid_argument("qt_rate: requires strictly positive volatility");
  if (static_cast<int>(g_values.size()) != grid.points())
    throw std::invalid_argument("qt_rate: g must have grid.points() values");
  if (g_values.front() != 0.0)
    throw std::invalid_argument("qt_rate: g(0) must be 0");
  const int n = grid.steps;
  std::vector<double> g_dot(n);
  for (int i = 0; i < n; ++i)
    g_dot[i] = (g_values[i + 1] - g_values[i]) / grid.dt();

  const HatWeights weights(model.kernel, grid);
  const QtObjective obj(std::move(g_dot), model, grid, weights);
  const MultistartResult ms =
      multistart_minimize(obj, n, to_multistart(opts, n, true));
  RateResult r = from_multistart(ms);
  r.l_dot = obj.implied_l_dot(r.f_dot);
  r.branch = "L2";
  return r;
}

RateResult it_rate(double x, const ModelSpec& model, const Grid& grid,
                   const SolverOptions& opts) {
  check_grid_model(model, grid, "it_rate");
  if (!model.vol.strictly_positive())
    throw std::invalid_argument("it_rate: requires strictly positive volatility");
  const int n = grid.steps;
  const HatWeights weights(model.kernel, grid);
  const TerminalObjective obj(x, model, grid, weights);
  const MultistartResult ms =
      multistart_minimize(obj, n, to_multistart(opts, n, true));
  RateResult r = from_multistart(ms);
  r.l_dot = obj.implied_l_dot(r.f_dot);
  r.branch = "L2";
  return r;
}

double lambda_xf(double x, const std::vector<double>& f_dot,
                 const ModelSpec& model, const Grid& grid, bool* l1_proximal) {
  if (static_cast<int>(f_dot.size()) != grid.steps)
    throw std::invalid_argument("lambda_xf: f_dot size must equal grid.steps");
  const HatWeights weights(model.kernel, grid);
  const TerminalObjective obj(x, model, grid, weights);
  double a, s;
  obj.aggregates(f_dot, &a, &s);
  if (l1_proximal) *l1_proximal = s <= kLambdaFloor;
  const double rb2 = model.rho_bar() * model.rho_bar();
  const double diff = x - a;
  return diff * diff / (rb2 * std::max(s, kLambdaFloor));
}

RateResult it_hat_rate(double x, const ModelSpec& model, const Grid& grid,
                       const SolverOptions& opts) {
  check_grid_model(model, grid, "it_hat_rate");
  if (model.vol.strictly_positive()) {
    RateResult r = it_rate(x, model, grid, opts);
    r.branch = "L2";
    return r;
  }
  if (model.vol.zero_set() != Volatility::ZeroSet::UZero)
    throw std::invalid_argument(
        "it_hat_rate: unsupported volatility zero set (must be empty or {u=0})");

  // L1 branch: f in L1 forces fhat == 0, so the constraint reads
  // x = int b(s,0) ds; f == 0 is then feasible with zero energy.
  const int n = grid.steps;
  double b0 = 0.0;
  for (int i = 0; i < n; ++i) b0 += model.drift(grid.time(i), 0.0) * grid.dt();
  if (std::fabs(x - b0) <= 1e-12 * std::max({1.0, std::fabs(x), std::fabs(b0)})) {
    RateResult r;
    r.value = 0.0;
    r.f_dot.assign(n, 0.0);
    r.converged = true;
    r.branch = "L1";
    r.starts_agreeing = 1;
    return r;
  }

  // L2 branch: keep starts away from the zero path (Lambda blows up there).
  const HatWeights weights(model.kernel, grid);
  const TerminalObjective obj(x, model, grid, weights);
  MultistartOptions mo = to_multistart(opts, n, false);
  mo.extra_starts.push_back(std::vector<double>(n, opts.start_scale));
  mo.extra_starts.push_back(std::vector<double>(n, -opts.start_scale));
  const MultistartResult ms = multistart_minimize(obj, n, mo);
  RateResult r = from_multistart(ms);
  double a, s;
  obj.aggregates(r.f_dot, &a, &s);
  r.l1_proximal = s <= kLambdaFloor;
  r.l_dot = obj.implied_l_dot(r.f_dot);
  r.branch = "L2";
  return r;
}

RateResult j_rate(const std::vector<double>& g_values,
                  const VolterraKernel& kernel, const Grid& grid,
                  double tikhonov, double residual_tol) {
  if (static_cast<int>(g_values.size()) != grid.points())
    throw std::invalid_argument("j_rate: g must have grid.points() values");
  if (g_values.front() != 0.0)
    throw std::invalid_argument("j_rate: g(0) must be 0");
  const int n = grid.steps;
  const std::vector<double> w = cell_integral_matrix(kernel, grid);
  // m[j-1][i] = W[j][i], lower triangular with positive diagonal
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int j = 1; j <= n; ++j)
    for (int i = 0; i < j; ++i)
      m[(j - 1) * static_cast<std::size_t>(n) + i] =
          w[static_cast<std::size_t>(j) * n + i];

  std::vector<double> gram(static_cast<std::size_t>(n) * n, 0.0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c <= r; ++c) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += m[r * static_cast<std::size_t>(n) + k] *
               m[c * static_cast<std::size_t>(n) + k];
      gram[r * static_cast<std::size_t>(n) + c] = acc;
      gram[c * static_cast<std::size_t>(n) + r] = acc;
    }
  double max_diag = 0.0;
  for (int r = 0; r < n; ++r)
    max_diag = std::max(max_diag, gram[r * static_cast<std::size_t>(n) + r]);
  const double lam = tikhonov * std::max(max_diag, 1.0);
  for (int r = 0; r < n; ++r) gram[r * static_cast<std::size_t>(n) + r] += lam;

  std::vector<double> rhs(g_values.begin() + 1, g_values.end());
  const std::vector<double> y = solve_spd(std::move(gram), n, rhs);
  std::vector<double> f_dot(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int r = 0; r < n; ++r)
      acc += m[r * static_cast<std::size_t>(n) + k] * y[r];
    f_dot[k] = acc;
  }

  double resid = 0.0, gmax = 0.0;
  for (int r = 0; r < n; ++r) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
      acc += m[r * static_cast<std::size_t>(n) + k] * f_dot[k];
    resid = std::max(resid, std::fabs(acc - g_values[r + 1]));
    gmax = std::max(gmax, std::fabs(g_values[r + 1]));
  }

  RateResult res;
  res.f_dot = std::move(f_dot);
  res.residual = resid;
  res.branch = "least_norm";
  res.converged = true;
  double e = 0.0;
  for (const double d : res.f_dot) e += d * d;
  e *= 0.5 * grid.dt();
  if (resid > residual_tol * std::max(1.0, gmax)) {
    res.value = std::numeric_limits<double>::infinity();
  } else {
    res.value = e;
  }
  return res;
}

}  // namespace roughldp
