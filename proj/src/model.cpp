#include "roughldp/model.hpp"

#include <cmath>
#include <stdexcept>

#include "roughldp/covariance.hpp"
#include "roughldp/linalg.hpp"
#include "roughldp/parallel.hpp"
#include "roughldp/rng.hpp"

namespace roughldp {

Drift Drift::constant(double r) {
  Drift d;
  d.fn_ = [r](double, double) { return r; };
  d.constant_ = true;
  d.r_ = r;
  d.desc_ = "constant(r=" + std::to_string(r) + ")";
  return d;
}

Drift Drift::affine(double intercept, double slope) {
  Drift d;
  d.fn_ = [intercept, slope](double, double u) { return intercept + slope * u; };
  d.constant_ = slope == 0.0;
  d.r_ = intercept;
  d.desc_ = "affine(" + std::to_string(intercept) + "," + std::to_string(slope) + ")";
  return d;
}

Drift Drift::custom(std::function<double(double, double)> fn,
                    std::string description) {
  Drift d;
  d.fn_ = std::move(fn);
  d.desc_ = std::move(description);
  return d;
}

Volatility Volatility::constant(double sigma0) {
  if (!(sigma0 > 0.0))
    throw std::invalid_argument("constant volatility must be positive");
  Volatility v;
  v.fn_ = [sigma0](double, double) { return sigma0; };
  v.strictly_positive_ = true;
  v.zero_set_ = ZeroSet::Empty;
  v.family_ = Family::Constant;
  v.c_ = sigma0;
  v.desc_ = "constant(" + std::to_string(sigma0) + ")";
  return v;
}

Volatility Volatility::wick_exp(double c, const Modulus& eta) {
  if (!(c > 0.0)) throw std::invalid_argument("wick_exp: c must be positive");
  Volatility v;
  Modulus m = eta;
  v.fn_ = [c, m](double t, double u) {
    const double e2 = m.eta_sq(t);
    return std::exp(-0.5 * c * c * e2 + c * u);
  };
  v.strictly_positive_ = true;
  v.zero_set_ = ZeroSet::Empty;
  v.family_ = Family::WickExp;
  v.c_ = c;
  v.desc_ = "wick_exp(c=" + std::to_string(c) + "," + eta.description() + ")";
  return v;
}

Volatility Volatility::rough_bergomi(double c, double hurst) {
  if (!(c > 0.0 && hurst > 0.0 && hurst < 1.0))
    throw std::invalid_argument("rough_bergomi: need c > 0 and H in (0,1)");
  Volatility v;
  const double g = std::tgamma(hurst + 0.5);
  const double denom = 4.0 * hurst * g * g;
  v.fn_ = [c, hurst, denom](double t, double u) {
    return std::exp(-c * c * std::pow(t, 2.0 * hurst) / denom + c * u);
  };
  v.strictly_positive_ = true;
  v.zero_set_ = ZeroSet::Empty;
  v.family_ = Family::RoughBergomi;
  v.c_ = c;
  v.desc_ = "rough_bergomi(c=" + std::to_string(c) + ",H=" + std::to_string(hurst) + ")";
  return v;
}

Volatility Volatility::abs_linear(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("abs_linear: c must be positive");
  Volatility v;
  v.fn_ = [c](double, double u) { return c * std::fabs(u); };
  v.strictly_positive_ = false;
  v.zero_set_ = ZeroSet::UZero;
  v.family_ = Family::AbsLinear;
  v.c_ = c;
  v.desc_ = "abs_linear(c=" + std::to_string(c) + ")";
  return v;
}

Volatility Volatility::custom(std::function<double(double, double)> fn,
                              bool strictly_positive, ZeroSet zero_set,
                              std::string description) {
  Volatility v;
  v.fn_ = std::move(fn);
  v.strictly_positive_ = strictly_positive;
  v.zero_set_ = zero_set;
  v.desc_ = std::move(description);
  return v;
}

ModelSpec::ModelSpec(Drift drift_in, Volatility vol_in, double rho_in,
                     VolterraKernel kernel_in, double horizon_in, double x0_in)
    : drift(std::move(drift_in)),
      vol(std::move(vol_in)),
      rho(rho_in),
      kernel(std::move(kernel_in)),
      horizon(horizon_in),
      x0(x0_in) {
  if (!(std::fabs(rho) < 1.0))
    throw std::invalid_argument("model: |rho| < 1 required");
  if (!(horizon > 0.0) || horizon > kernel.horizon() * (1.0 + 1e-12))
    throw std::invalid_argument("model: horizon must lie within the kernel domain");
}

double ModelSpec::rho_bar() const { return std::sqrt(1.0 - rho * rho); }

namespace {

// Joint exact draw of (Bhat_{t_1..t_n}, dB_{0..n-1}): covariance blocks
//   [ C      W  ]   with W[j][i] = int_{cell i} K(t_j,u) du
//   [ W^T  dt I ]
std::vector<double> joint_cholesky_factor(const ModelSpec& model,
                                          const Grid& grid, int workers) {
  const int n = grid.steps;
  const CovarianceMatrix cov = covariance_matrix(model.kernel, grid, 8, workers);
  const std::vector<double> w = cell_integral_matrix(model.kernel, grid);
  const std::size_t m = 2 * static_cast<std::size_t>(n);
  std::vector<double> joint(m * m, 0.0);
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) joint[(j - 1) * m + (k - 1)] = cov.at(j, k);
  for (int j = 1; j <= n; ++j)
    for (int i = 0; i < n; ++i) {
      const double v = w[static_cast<std::size_t>(j) * n + i];
      joint[(j - 1) * m + (n + i)] = v;
      joint[(n + i) * m + (j - 1)] = v;
    }
  for (int i = 0; i < n; ++i) joint[(n + i) * m + (n + i)] = grid.dt();
  if (!cholesky_lower(joint, m, 1e-10))
    throw std::runtime_error(
        "simulate_log_price: joint (Bhat, dB) covariance indefinite; refine "
        "quadrature");
  return joint;
}

}  // namespace

PathEnsemble simulate_log_price(const ModelSpec& model, double eps,
                                const Grid& grid, std::size_t n_paths,
                                std::uint64_t seed, Scheme scheme,
                                int workers) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("simulate_log_price: eps must be in (0,1]");
  if (std::fabs(grid.horizon - model.horizon) > 1e-12 * model.horizon)
    throw std::invalid_argument("simulate_log_price: grid/model horizon mismatch");

  const int n = grid.steps;
  const int np = grid.points();
  const double dt = grid.dt();
  const double sqrt_dt = std::sqrt(dt);
  const double sqrt_eps = std::sqrt(eps);
  const double rho = model.rho;
  const double rho_bar = model.rho_bar();

  PathEnsemble ens;
  ens.grid = grid;
  ens.n_paths = n_paths;
  ens.seed = seed;
  ens.scheme = scheme;
  ens.kernel_desc = model.kernel.description();
  ens.values.assign(n_paths * static_cast<std::size_t>(np), 0.0);

  const CounterRng rng(seed);

  // euler step shared by both schemes; bhat indexed 0..n, db indexed 0..n-1
  const auto accumulate = [&](std::size_t p, const double* bhat,
                              const double* db, double* out) {
    double x = 0.0;
    out[0] = 0.0;
    for (int j = 0; j < n; ++j) {
      const double t = grid.time(j);
      const double u = sqrt_eps * bhat[j];
      const double sig = model.vol(t, u);
      const double dw = sqrt_dt * rng.normal(p, j, kStreamPriceNoise);
      x += model.drift(t, u) * dt - 0.5 * eps * sig * sig * dt +
           sqrt_eps * sig * (rho_bar * dw + rho * db[j]);
      out[j + 1] = x;
    }
  };

  if (scheme == Scheme::Convolution) {
    PathEnsemble driver =
        sample_convolution(model.kernel, grid, n_paths, seed, workers);
    ens.midpoint_fallback = driver.midpoint_fallback;
    parallel_blocks(n_paths, 64, workers, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t p = lo; p < hi; ++p)
        accumulate(p, &driver.values[p * np], &driver.increments[p * n],
                   &ens.values[p * np]);
    });
    return ens;
  }

  const std::vector<double> factor = joint_cholesky_factor(model, grid, workers);
  const std::size_t m = 2 * static_cast<std::size_t>(n);
  parallel_blocks(n_paths, 64, workers, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> z(m), y(m), bhat(np);
    for (std::size_t p = lo; p < hi; ++p) {
      for (std::size_t i = 0; i < m; ++i)
        z[i] = rng.normal(p, i, kStreamDrivingNoise);
      for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        const double* li = &factor[i * m];
        for (std::size_t k = 0; k <= i; ++k) acc += li[k] * z[k];
        y[i] = acc;
      }
      bhat[0] = 0.0;
      for (int j = 1; j <= n; ++j) bhat[j] = y[j - 1];
      accumulate(p, bhat.data(), &y[n], &ens.values[p * np]);
    }
  });
  return ens;
}

GrowthCheck sublinear_growth_check(const Volatility& vol, double horizon,
                                   double box_radius, double c1, double c2,
                                   int lattice_n) {
  GrowthCheck res;
  if (const auto cert = analytic_growth_certificate(vol)) {
    if (cert->first <= c1 && cert->second <= c2) {
      res.holds = true;
      res.analytic = true;
      res.c1 = cert->first;
      res.c2 = cert->second;
      return res;
    }
  }
  res.c1 = c1;
  res.c2 = c2;
  for (int it = 0; it <= lattice_n; ++it) {
    const double t = horizon * it / lattice_n;
    for (int iu = 0; iu <= lattice_n; ++iu) {
      const double u = -box_radius + 2.0 * box_radius * iu / lattice_n;
      const double s = vol(t, u);
      if (s * s > c1 + c2 * u * u) {
        res.holds = false;
        res.witness_t = t;
        res.witness_u = u;
        return res;
      }
    }
  }
  res.holds = true;
  return res;
}

std::optional<std::pair<double, double>> analytic_growth_certificate(
    const Volatility& vol) {
  switch (vol.family()) {
    case Volatility::Family::Constant:
      return std::make_pair(vol.param_c() * vol.param_c(), 0.0);
    case Volatility::Family::AbsLinear:
      return std::make_pair(0.0, vol.param_c() * vol.param_c());
    default:
      return std::nullopt;
  }
}

namespace {

double probe_box(const std::function<double(double, double)>& fn,
                 const std::function<double(double)>& omega, double horizon,
                 double radius, int lattice_n) {
  std::vector<double> ts(lattice_n + 1), us(lattice_n + 1);
  std::vector<double> vals;
  vals.reserve((lattice_n + 1) * (lattice_n + 1));
  for (int i = 0; i <= lattice_n; ++i) {
    ts[i] = horizon * i / lattice_n;
    us[i] = -radius + 2.0 * radius * i / lattice_n;
  }
  for (int i = 0; i <= lattice_n; ++i)
    for (int j = 0; j <= lattice_n; ++j) vals.push_back(fn(ts[i], us[j]));
  double best = 0.0;
  const int np = lattice_n + 1;
  for (int a = 0; a < np * np; ++a) {
    for (int b = a + 1; b < np * np; ++b) {
      const double dtv = std::fabs(ts[a / np] - ts[b / np]);
      const double duv = std::fabs(us[a % np] - us[b % np]);
      const double w = omega(dtv + duv);
      if (w <= 0.0) continue;
      best = std::max(best, std::fabs(vals[a] - vals[b]) / w);
    }
  }
  return best;
}

}  // namespace

OmegaContinuityProbe assumption_c_probe(
    const std::function<double(double, double)>& fn,
    const std::function<double(double)>& omega, double horizon,
    double box_radius, int lattice_n) {
  OmegaContinuityProbe p;
  p.l_estimate = probe_box(fn, omega, horizon, box_radius, lattice_n);
  p.l_half_box = probe_box(fn, omega, horizon, 0.5 * box_radius, lattice_n);
  p.growth_ratio = p.l_half_box > 0.0 ? p.l_estimate / p.l_half_box : 0.0;
  return p;
}

}  // namespace roughldp
