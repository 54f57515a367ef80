#include "roughldp/applications.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roughldp/covariance.hpp"
#include "roughldp/optimizer.hpp"

namespace roughldp {

namespace {

void require_barrier_model(const ModelSpec& model, const BarrierSpec& spec) {
  if (!model.vol.strictly_positive())
    throw std::invalid_argument("barrier_rate: requires strictly positive volatility");
  if (!model.drift.is_constant())
    throw std::invalid_argument("barrier_rate: requires constant drift");
  if (!(spec.barrier > 0.0) || !(spec.cash > 0.0) || spec.rate_r < 0.0)
    throw std::invalid_argument("barrier_rate: need K > 0, G > 0, r >= 0");
  const double s0 = std::exp(model.x0);
  const bool up = spec.kind == BarrierSpec::Kind::UpIn ||
                  spec.kind == BarrierSpec::Kind::UpOut;
  if (up && !(s0 < spec.barrier))
    throw std::invalid_argument("barrier_rate: up kinds require s0 < K");
  if (!up && !(spec.barrier < s0))
    throw std::invalid_argument("barrier_rate: down kinds require K < s0");
}

// Hitting-time reduction for the in-kinds: one terminal problem per grid
// time, warm-starting each solve from the previous minimizer.
AsymptoticReport in_kind_scan(const ModelSpec& model, double m,
                              const Grid& grid, const SolverOptions& opts) {
  AsymptoticReport rep;
  rep.branch = "hitting_time_scan";
  rep.rate = std::numeric_limits<double>::infinity();
  SolverOptions local = opts;
  for (int j = 1; j <= grid.steps; ++j) {
    const double tj = grid.time(j);
    const Grid sub(tj, j);
    const ModelSpec sub_model(model.drift, model.vol, model.rho, model.kernel,
                              tj, model.x0);
    const RateResult r = it_rate(m, sub_model, sub, local);
    rep.profile.emplace_back(tj, r.value);
    if (r.value < rep.rate) {
      rep.rate = r.value;
      rep.attaining_time = tj;
      rep.solver = r;
    }
    local.warm_start = r.f_dot;
    local.warm_start.push_back(r.f_dot.empty() ? 0.0 : r.f_dot.back());
  }
  return rep;
}

// Penalized formulation for an out-kind whose zero-cost path crosses the
// barrier: minimize (1/2) int (l'^2 + f'^2) with a quadratic hinge on the
// crossing, continuation on the penalty weight.
class OutPenaltyObjective final : public ObjectiveFn {
 public:
  OutPenaltyObjective(const ModelSpec& model, const Grid& grid,
                      const std::vector<double>& w, double bound, bool upper,
                      double mu)
      : model_(model), grid_(grid), w_(w), bound_(bound), upper_(upper), mu_(mu) {}

  // x = (f_dot | l_dot)
  double value(const std::vector<double>& x) const override {
    const int n = grid_.steps;
    const double dt = grid_.dt();
    const double rho = model_.rho, rho_bar = model_.rho_bar();
    double energy = 0.0, g = 0.0, penalty = 0.0;
    std::vector<double> fhat(n, 0.0);
    for (int i = 1; i < n; ++i) {
      double acc = 0.0;
      for (int k = 0; k < i; ++k)
        acc += w_[static_cast<std::size_t>(i) * n + k] * x[k];
      fhat[i] = acc;
    }
    for (int i = 0; i < n; ++i) {
      const double fd = x[i], ld = x[n + i];
      const double t = grid_.time(i);
      const double sig = model_.vol(t, fhat[i]);
      energy += 0.5 * (fd * fd + ld * ld) * dt;
      g += (model_.drift(t, fhat[i]) + rho * sig * fd + rho_bar * sig * ld) * dt;
      const double over = upper_ ? g - bound_ : bound_ - g;
      if (over > 0.0) penalty += over * over;
    }
    return energy + mu_ * penalty;
  }

 private:
  const ModelSpec& model_;
  const Grid& grid_;
  const std::vector<double>& w_;
  double bound_;
  bool upper_;  // true: keep g below bound, false: keep g above
  double mu_;
};

AsymptoticReport out_kind_rate(const ModelSpec& model, double m,
                               const Grid& grid, bool upper,
                               const SolverOptions& opts) {
  AsymptoticReport rep;
  const int n = grid.steps;
  const double dt = grid.dt();
  // zero-cost path membership first
  double g = 0.0;
  bool crossed = false;
  for (int i = 0; i < n; ++i) {
    g += model.drift(grid.time(i), 0.0) * dt;
    if (upper ? g >= m : g <= m) crossed = true;
  }
  if (!crossed) {
    rep.rate = 0.0;
    rep.branch = "zero_cost_path";
    return rep;
  }
  rep.branch = "penalized";
  const std::vector<double> w = cell_integral_matrix(model.kernel, grid);
  // cell weights indexed by left points: reuse rows 0..n-1
  std::vector<double> wl(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < i; ++k)
      wl[static_cast<std::size_t>(i) * n + k] =
          w[static_cast<std::size_t>(i) * n + k];
  const double margin = 1e-6 * std::max(1.0, std::fabs(m));
  const double bound = upper ? m - margin : m + margin;
  std::vector<double> x(2 * n, 0.0);
  double val = 0.0;
  for (double mu = 1e2; mu <= 1e6 + 1.0; mu *= 10.0) {
    const OutPenaltyObjective obj(model, grid, wl, bound, upper, mu);
    LocalOptions lo;
    lo.grad_tol = opts.grad_tol;
    lo.max_iterations = opts.max_iterations;
    const LocalResult r = lbfgs_minimize(obj, x, lo);
    x = r.x;
    // report the unpenalized action at the final iterate
    double energy = 0.0;
    for (int i = 0; i < 2 * n; ++i) energy += 0.5 * x[i] * x[i] * dt;
    val = energy;
  }
  rep.rate = val;
  return rep;
}

}  // namespace

AsymptoticReport barrier_rate(const ModelSpec& model, const BarrierSpec& spec,
                              const Grid& grid, const SolverOptions& opts) {
  require_barrier_model(model, spec);
  const double m = std::log(spec.barrier) - model.x0;
  switch (spec.kind) {
    case BarrierSpec::Kind::UpIn:
    case BarrierSpec::Kind::DownIn:
      return in_kind_scan(model, m, grid, opts);
    case BarrierSpec::Kind::UpOut:
      return out_kind_rate(model, m, grid, /*upper=*/true, opts);
    case BarrierSpec::Kind::DownOut:
      return out_kind_rate(model, m, grid, /*upper=*/false, opts);
  }
  throw std::logic_error("barrier_rate: unreachable");
}

AsymptoticReport exit_time_rate(const ModelSpec& model, double barrier_price,
                                const Grid& grid, const SolverOptions& opts) {
  BarrierSpec spec;
  spec.kind = BarrierSpec::Kind::UpIn;
  spec.barrier = barrier_price;
  spec.cash = 1.0;
  spec.rate_r = std::max(0.0, model.drift.constant_value());
  return barrier_rate(model, spec, grid, opts);
}

namespace {

AsymptoticReport call_scan(const ModelSpec& model, double strike,
                           const Grid& grid, const SolverOptions& opts) {
  if (!model.drift.is_constant())
    throw std::invalid_argument("call rates: require constant drift b = r");
  const double r = model.drift.constant_value();
  const double m = std::log(strike) - model.x0;
  if (!(m > r * model.horizon))
    throw std::invalid_argument(
        "call rates: out-of-the-money configuration K > s0 e^{rT} required");

  AsymptoticReport rep;
  rep.branch = "boundary_scan";
  rep.rate = std::numeric_limits<double>::infinity();
  // geometric offsets from the boundary, 1e-3 relative refinement near it
  const double scale = std::max(m - r * model.horizon, 1e-3);
  std::vector<double> xs{m};
  for (double step = 1e-3 * scale; step <= 2.0 * scale; step *= 2.0)
    xs.push_back(m + step);
  SolverOptions local = opts;
  for (const double x : xs) {
    const RateResult res = it_hat_rate(x, model, grid, local);
    rep.profile.emplace_back(x, res.value);
    if (res.value < rep.rate) {
      rep.rate = res.value;
      rep.attaining_x = x;
      rep.solver = res;
    }
    if (!res.f_dot.empty()) local.warm_start = res.f_dot;
  }
  return rep;
}

}  // namespace

AsymptoticReport binary_call_rate(const ModelSpec& model, double strike,
                                  const Grid& grid, const SolverOptions& opts) {
  return call_scan(model, strike, grid, opts);
}

AsymptoticReport call_rate(const ModelSpec& model, double strike,
                           const Grid& grid, const SolverOptions& opts) {
  AsymptoticReport rep = call_scan(model, strike, grid, opts);
  if (const auto cert = analytic_growth_certificate(model.vol)) {
    rep.growth_certified = true;
    rep.growth_c1 = cert->first;
    rep.growth_c2 = cert->second;
  } else {
    rep.growth_certified = false;
    rep.warning =
        "sublinear growth condition not certified for " +
        model.vol.description() + "; rate computed anyway";
  }
  return rep;
}

}  // namespace roughldp
