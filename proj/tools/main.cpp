// roughldp CLI: simulate / rate / verify / diagnose / check subcommands over
// a JSON run config, CSV outputs plus a manifest enabling byte-exact re-runs.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roughldp/applications.hpp"
#include "roughldp/covariance.hpp"
#include "roughldp/csv.hpp"
#include "roughldp/diagnostics.hpp"
#include "roughldp/mc_harness.hpp"
#include "roughldp/model.hpp"
#include "roughldp/rate_solver.hpp"

namespace rl = roughldp;
using nlohmann::json;

namespace {

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] void fail_config(const std::string& where, const std::string& what) {
  throw CliError(2, "config error at " + where + ": " + what);
}

double need_number(const json& j, const std::string& section,
                   const std::string& key) {
  if (!j.contains(key) || !j[key].is_number())
    fail_config(section + "." + key, "missing or non-numeric");
  return j[key].get<double>();
}

double number_or(const json& j, const std::string& key, double dflt) {
  return j.contains(key) ? j[key].get<double>() : dflt;
}

std::string need_string(const json& j, const std::string& section,
                        const std::string& key) {
  if (!j.contains(key) || !j[key].is_string())
    fail_config(section + "." + key, "missing or non-string");
  return j[key].get<std::string>();
}

rl::Modulus build_modulus(const json& m) {
  const std::string family = need_string(m, "model.modulus", "family");
  try {
    if (family == "power")
      return rl::Modulus::power(need_number(m, "model.modulus", "H"),
                                need_number(m, "model.modulus", "T"));
    if (family == "logarithmic")
      return rl::Modulus::logarithmic(need_number(m, "model.modulus", "beta"),
                                      need_number(m, "model.modulus", "T"));
    if (family == "custom_table") {
      std::vector<double> xs = m.at("x").get<std::vector<double>>();
      std::vector<double> etas = m.at("eta").get<std::vector<double>>();
      return rl::Modulus::custom_table(xs, etas,
                                       need_number(m, "model.modulus", "T"));
    }
  } catch (const std::invalid_argument& e) {
    fail_config("model.modulus", e.what());
  }
  fail_config("model.modulus.family", "unknown family '" + family + "'");
}

rl::VolterraKernel build_kernel(const json& model) {
  if (!model.contains("kernel")) fail_config("model.kernel", "missing section");
  const json& k = model["kernel"];
  const std::string family = need_string(k, "model.kernel", "family");
  const double T = need_number(model, "model", "T");
  try {
    if (family == "brownian") return rl::VolterraKernel::brownian(T);
    if (family == "molchan_golosov")
      return rl::VolterraKernel::molchan_golosov(
          need_number(k, "model.kernel", "H"), T);
    if (family == "riemann_liouville")
      return rl::VolterraKernel::riemann_liouville(
          need_number(k, "model.kernel", "H"), T);
    if (family == "mv_stationary") {
      if (!model.contains("modulus"))
        fail_config("model.modulus", "required for mv_stationary kernels");
      json mod = model["modulus"];
      if (!mod.contains("T")) mod["T"] = T;
      return rl::VolterraKernel::mv_stationary(build_modulus(mod));
    }
  } catch (const std::invalid_argument& e) {
    fail_config("model.kernel", e.what());
  }
  fail_config("model.kernel.family", "unknown family '" + family + "'");
}

rl::Drift build_drift(const json& model) {
  if (!model.contains("drift")) return rl::Drift::constant(0.0);
  const json& d = model["drift"];
  const std::string family = need_string(d, "model.drift", "family");
  if (family == "constant")
    return rl::Drift::constant(need_number(d, "model.drift", "r"));
  if (family == "affine")
    return rl::Drift::affine(need_number(d, "model.drift", "intercept"),
                             need_number(d, "model.drift", "slope"));
  fail_config("model.drift.family", "unknown family '" + family + "'");
}

rl::Volatility build_volatility(const json& model) {
  if (!model.contains("volatility"))
    fail_config("model.volatility", "missing section");
  const json& v = model["volatility"];
  const std::string family = need_string(v, "model.volatility", "family");
  try {
    if (family == "constant")
      return rl::Volatility::constant(need_number(v, "model.volatility", "sigma0"));
    if (family == "abs_linear")
      return rl::Volatility::abs_linear(need_number(v, "model.volatility", "c"));
    if (family == "rough_bergomi")
      return rl::Volatility::rough_bergomi(need_number(v, "model.volatility", "c"),
                                           need_number(v, "model.volatility", "H"));
    if (family == "wick_exp") {
      if (!model.contains("modulus"))
        fail_config("model.modulus", "required for wick_exp volatility");
      json mod = model["modulus"];
      if (!mod.contains("T")) mod["T"] = model["T"];
      return rl::Volatility::wick_exp(need_number(v, "model.volatility", "c"),
                                      build_modulus(mod));
    }
  } catch (const std::invalid_argument& e) {
    fail_config("model.volatility", e.what());
  }
  fail_config("model.volatility.family", "unknown family '" + family + "'");
}

rl::ModelSpec build_model(const json& cfg) {
  if (!cfg.contains("model")) fail_config("model", "missing section");
  const json& m = cfg["model"];
  const double T = need_number(m, "model", "T");
  const double rho = number_or(m, "rho", 0.0);
  const double x0 = number_or(m, "x0", 0.0);
  try {
    return rl::ModelSpec(build_drift(m), build_volatility(m), rho,
                         build_kernel(m), T, x0);
  } catch (const std::invalid_argument& e) {
    fail_config("model", e.what());
  }
}

rl::Grid build_grid(const json& cfg, double T) {
  if (!cfg.contains("grid") || !cfg["grid"].contains("n"))
    fail_config("grid.n", "missing");
  const int n = cfg["grid"]["n"].get<int>();
  if (n < 2) fail_config("grid.n", "must be >= 2");
  return rl::Grid(T, n);
}

rl::Scheme parse_scheme(const json& exp) {
  const std::string s =
      exp.contains("scheme") ? exp["scheme"].get<std::string>() : "convolution";
  if (s == "convolution") return rl::Scheme::Convolution;
  if (s == "cholesky") return rl::Scheme::Cholesky;
  fail_config("experiment.scheme", "must be 'convolution' or 'cholesky'");
}

rl::EventSpec parse_event(const json& e) {
  rl::EventSpec ev;
  const std::string kind = need_string(e, "experiment.event", "kind");
  if (kind == "terminal_geq")
    ev.kind = rl::EventSpec::Kind::TerminalGeq;
  else if (kind == "terminal_leq")
    ev.kind = rl::EventSpec::Kind::TerminalLeq;
  else if (kind == "barrier_max_geq")
    ev.kind = rl::EventSpec::Kind::BarrierMaxGeq;
  else if (kind == "barrier_min_leq")
    ev.kind = rl::EventSpec::Kind::BarrierMinLeq;
  else
    fail_config("experiment.event.kind", "unknown kind '" + kind + "'");
  ev.threshold = need_number(e, "experiment.event", "threshold");
  return ev;
}

rl::SolverOptions parse_solver(const json& exp, std::uint64_t seed, int workers) {
  rl::SolverOptions opts;
  opts.seed = seed;
  opts.workers = workers;
  if (exp.contains("starts")) opts.random_starts = exp["starts"].get<int>();
  if (exp.contains("start_scale"))
    opts.start_scale = exp["start_scale"].get<double>();
  return opts;
}

struct Run {
  json config;
  std::string command;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out_dir = "out";
  bool quiet = false;
  std::vector<std::string> outputs;

  void log(const std::string& msg) const {
    if (!quiet) std::cout << msg << "\n";
  }

  std::string out_path(const std::string& name) const {
    return (std::filesystem::path(out_dir) / name).string();
  }

  void emit(const std::string& name, const rl::CsvWriter& csv) {
    csv.write(out_path(name));
    outputs.push_back(name);
  }
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_manifest(Run& run) {
  json man;
  man["command"] = run.command;
  man["config"] = run.config;
  man["seed"] = run.seed;
  man["workers"] = run.workers;
  man["outputs"] = run.outputs;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a(run.config.dump())));
  man["config_hash"] = hash;
  rl::write_file_atomic(run.out_path("manifest.json"), man.dump(2) + "\n");
}

// --- subcommands ---------------------------------------------------------

void cmd_simulate(Run& run) {
  const json& cfg = run.config;
  const rl::ModelSpec model = build_model(cfg);
  const rl::Grid grid = build_grid(cfg, model.horizon);
  const json exp = cfg.contains("experiment") ? cfg["experiment"] : json::object();
  const double eps = number_or(exp, "eps", 1.0);
  const std::size_t paths = static_cast<std::size_t>(number_or(exp, "paths", 100));
  if (!(eps > 0.0 && eps <= 1.0)) fail_config("experiment.eps", "must be in (0,1]");
  const rl::Scheme scheme = parse_scheme(exp);

  const rl::PathEnsemble ens = rl::simulate_log_price(
      model, eps, grid, paths, run.seed, scheme, run.workers);

  rl::CsvWriter paths_csv;
  std::vector<double> times(grid.points());
  for (int j = 0; j < grid.points(); ++j) times[j] = grid.time(j);
  paths_csv.row(times);  // header row: the time grid
  std::vector<double> rowbuf(grid.points());
  for (std::size_t p = 0; p < paths; ++p) {
    for (int j = 0; j < grid.points(); ++j) rowbuf[j] = ens.value(p, j);
    paths_csv.row(rowbuf);
  }
  run.emit("paths.csv", paths_csv);

  rl::CsvWriter term_csv;
  term_csv.header({"x_T"});
  for (std::size_t p = 0; p < paths; ++p)
    term_csv.row({ens.value(p, grid.steps)});
  run.emit("terminal.csv", term_csv);
  run.log("simulate: wrote " + std::to_string(paths) + " paths");
}

void cmd_rate(Run& run) {
  const json& cfg = run.config;
  const rl::ModelSpec model = build_model(cfg);
  const rl::Grid grid = build_grid(cfg, model.horizon);
  const json exp = cfg.contains("experiment") ? cfg["experiment"] : json::object();
  const std::string which =
      exp.contains("rate") ? exp["rate"].get<std::string>() : "it";
  rl::SolverOptions opts = parse_solver(exp, run.seed, run.workers);

  rl::CsvWriter csv;
  csv.header({"x", "rate", "converged", "starts_agreeing"});
  if (which == "it" || which == "ihat") {
    if (!exp.contains("x_values"))
      fail_config("experiment.x_values", "required for terminal rates");
    const auto xs = exp["x_values"].get<std::vector<double>>();
    for (const double x : xs) {
      const rl::RateResult r = which == "it"
                                   ? rl::it_rate(x, model, grid, opts)
                                   : rl::it_hat_rate(x, model, grid, opts);
      csv.row({x, r.value, r.converged ? 1.0 : 0.0,
               static_cast<double>(r.starts_agreeing)});
      if (!r.f_dot.empty()) opts.warm_start = r.f_dot;
    }
  } else if (which == "qt" || which == "j") {
    std::vector<double> g(grid.points(), 0.0);
    if (exp.contains("g_values")) {
      g = exp["g_values"].get<std::vector<double>>();
      if (static_cast<int>(g.size()) != grid.points())
        fail_config("experiment.g_values", "size must be grid n+1");
    } else {
      const double gT = number_or(exp, "g_terminal", 0.0);
      for (int j = 0; j < grid.points(); ++j)
        g[j] = gT * grid.time(j) / grid.horizon;
    }
    const rl::RateResult r =
        which == "qt" ? rl::qt_rate(g, model, grid, opts)
                      : rl::j_rate(g, model.kernel, grid);
    csv.row({g.back(), r.value, r.converged ? 1.0 : 0.0,
             static_cast<double>(r.starts_agreeing)});
  } else {
    fail_config("experiment.rate", "must be one of it|ihat|qt|j");
  }
  run.emit("rate.csv", csv);
  run.log("rate: wrote rate.csv");
}

void emit_sweep(Run& run, const rl::SweepTable& sweep) {
  rl::CsvWriter csv;
  csv.header({"eps", "n", "hits", "p_hat", "se", "eps_log_p", "band_lo",
              "band_hi"});
  for (const auto& r : sweep.rows)
    csv.row({r.eps, static_cast<double>(r.n_paths),
             static_cast<double>(r.hits), r.p_hat, r.se, r.eps_log_p,
             r.band_lo, r.band_hi});
  if (sweep.fitted) {
    csv.raw_line("# fit: intercept=" + rl::format_double(sweep.intercept) +
                 " slope=" + rl::format_double(sweep.slope) +
                 " residual=" + rl::format_double(sweep.fit_residual) +
                 " usable_rows=" + std::to_string(sweep.usable_rows));
  } else {
    csv.raw_line("# fit: none (fewer than 3 usable rows)");
  }
  if (!sweep.advisory.empty()) csv.raw_line("# advisory: " + sweep.advisory);
  run.emit("sweep.csv", csv);
}

int cmd_verify(Run& run) {
  const json& cfg = run.config;
  const rl::ModelSpec model = build_model(cfg);
  const rl::Grid grid = build_grid(cfg, model.horizon);
  if (!cfg.contains("experiment")) fail_config("experiment", "missing section");
  const json exp = cfg["experiment"];
  const rl::EventSpec event = parse_event(
      exp.contains("event") ? exp["event"] : json::object());
  if (!exp.contains("eps_list"))
    fail_config("experiment.eps_list", "required");
  const auto eps_list = exp["eps_list"].get<std::vector<double>>();
  const double tolerance = number_or(exp, "tolerance", 0.1);
  const bool analytic = exp.contains("feed") && exp["feed"] == "analytic";

  // solver side: rate of the event, optionally at an overridden threshold
  const double rate_threshold = number_or(exp, "rate_threshold", event.threshold);
  rl::SolverOptions opts = parse_solver(exp, run.seed, run.workers);
  double solver_rate = 0.0;
  if (event.kind == rl::EventSpec::Kind::BarrierMaxGeq) {
    rl::BarrierSpec bs;
    bs.kind = rl::BarrierSpec::Kind::UpIn;
    bs.barrier = std::exp(model.x0 + rate_threshold);
    bs.rate_r = std::max(0.0, model.drift.constant_value());
    solver_rate = rl::barrier_rate(model, bs, grid, opts).rate;
  } else if (event.kind == rl::EventSpec::Kind::BarrierMinLeq) {
    rl::BarrierSpec bs;
    bs.kind = rl::BarrierSpec::Kind::DownIn;
    bs.barrier = std::exp(model.x0 + rate_threshold);
    bs.rate_r = std::max(0.0, model.drift.constant_value());
    solver_rate = rl::barrier_rate(model, bs, grid, opts).rate;
  } else {
    // terminal event: inf of Ihat over the closed half-line
    const bool geq = event.kind == rl::EventSpec::Kind::TerminalGeq;
    double best = std::numeric_limits<double>::infinity();
    const double scale = std::max(std::fabs(rate_threshold), 1e-3);
    std::vector<double> xs{rate_threshold};
    for (double step = 1e-3 * scale; step <= 2.0 * scale; step *= 2.0)
      xs.push_back(geq ? rate_threshold + step : rate_threshold - step);
    for (const double x : xs) {
      const rl::RateResult r = rl::it_hat_rate(x, model, grid, opts);
      best = std::min(best, r.value);
      if (!r.f_dot.empty()) opts.warm_start = r.f_dot;
    }
    solver_rate = best;
  }

  const std::size_t paths =
      static_cast<std::size_t>(number_or(exp, "paths_per_eps", 100000));
  const rl::SweepTable sweep =
      analytic ? rl::ldp_sweep_analytic(model, event, eps_list)
               : rl::ldp_sweep(model, event, eps_list, paths, run.seed, grid,
                               parse_scheme(exp), run.workers);
  emit_sweep(run, sweep);

  if (!sweep.fitted) throw CliError(3, "verify: sweep fit unavailable");
  const rl::CompareResult cmp = rl::compare_rate(sweep, solver_rate, tolerance);

  rl::CsvWriter verdict;
  verdict.header({"l_hat", "l_solver", "gap", "tolerance", "consistent"});
  verdict.row({cmp.l_hat, cmp.l_solver, cmp.gap, tolerance,
               cmp.consistent ? 1.0 : 0.0});
  run.emit("verdict.csv", verdict);
  run.log(std::string("verify: ") + (cmp.consistent ? "consistent" : "inconsistent"));
  return cmp.consistent ? 0 : 4;
}

void cmd_diagnose(Run& run) {
  const json& cfg = run.config;
  const rl::ModelSpec model = build_model(cfg);
  const rl::Grid grid = build_grid(cfg, model.horizon);
  const json exp = cfg.contains("experiment") ? cfg["experiment"] : json::object();
  const std::size_t paths = static_cast<std::size_t>(number_or(exp, "paths", 50));

  const rl::PathEnsemble ens = rl::sample_convolution(
      model.kernel, grid, paths, run.seed, run.workers);
  std::optional<rl::Modulus> eta;
  if (cfg["model"].contains("modulus")) {
    json mod = cfg["model"]["modulus"];
    if (!mod.contains("T")) mod["T"] = model.horizon;
    eta = build_modulus(mod);
  }
  const rl::RoughnessReport rep = rl::roughness_report(
      ens, eta ? &*eta : nullptr, number_or(exp, "lil_t_min", 0.0));

  rl::CsvWriter csv;
  csv.header({"lag", "median_oscillation", "slope", "slope_stderr",
              "lil_exceed_fraction"});
  for (std::size_t k = 0; k < rep.lags.size(); ++k)
    csv.row({static_cast<double>(rep.lags[k]), rep.median_oscillation[k],
             rep.median_slope, rep.slope_stderr_median,
             rep.lil_exceed_fraction});
  run.emit("roughness.csv", csv);
  run.log("diagnose: median slope " + rl::format_double(rep.median_slope));
}

void cmd_check(Run& run) {
  const json& cfg = run.config;
  const rl::ModelSpec model = build_model(cfg);
  const rl::Grid grid = build_grid(cfg, model.horizon);
  const json exp = cfg.contains("experiment") ? cfg["experiment"] : json::object();
  const int quad = static_cast<int>(number_or(exp, "quad_resolution", 8));

  rl::CsvWriter csv;
  csv.header({"fernique", "mv_admissible", "max_lower_violation",
              "max_upper_violation", "pairs_checked"});
  double fv = -1.0, mv = -1.0;
  double lo = 0.0, hi = 0.0, pairs = 0.0;
  if (cfg["model"].contains("modulus")) {
    json mod = cfg["model"]["modulus"];
    if (!mod.contains("T")) mod["T"] = model.horizon;
    const rl::Modulus eta = build_modulus(mod);
    fv = static_cast<double>(static_cast<int>(rl::fernique_classify(eta)));
    mv = eta.mv_admissible() ? 1.0 : 0.0;
    if (eta.mv_admissible() &&
        model.kernel.family() == rl::KernelFamily::MvStationary) {
      const rl::CovarianceMatrix cov =
          rl::covariance_matrix(model.kernel, grid, quad, run.workers);
      const std::vector<double> delta = rl::canonical_metric(cov);
      const rl::SandwichReport rep = rl::metric_sandwich_report(delta, eta, grid);
      lo = rep.max_lower_violation;
      hi = rep.max_upper_violation;
      pairs = rep.pairs_checked;
    }
  }
  csv.row({fv, mv, lo, hi, pairs});
  run.emit("check.csv", csv);
  run.log("check: wrote check.csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volterra Gaussian volatility: simulation, rate functions, "
               "LDP verification"};
  app.require_subcommand(1);

  std::string config_path, out_override;
  std::uint64_t seed_override = 0;
  bool have_seed = false, quiet = false;
  int workers_override = 0;

  app.add_option("--config", config_path, "run configuration (JSON)")
      ->required();
  app.add_option("--seed", seed_override, "seed override")
      ->each([&](const std::string&) { have_seed = true; });
  app.add_option("--workers", workers_override, "worker count override");
  app.add_option("--out", out_override, "output directory override");
  app.add_flag("--quiet", quiet, "suppress log lines");

  auto* sim = app.add_subcommand("simulate", "sample scaled log-price paths");
  auto* rate = app.add_subcommand("rate", "rate-function queries and scans");
  auto* verify = app.add_subcommand("verify", "MC sweep vs solver rate");
  auto* diagnose = app.add_subcommand("diagnose", "path roughness report");
  auto* check = app.add_subcommand("check", "kernel/modulus classification");

  CLI11_PARSE(app, argc, argv);

  try {
    json cfg;
    {
      std::ifstream in(config_path);
      if (!in) throw CliError(2, "cannot open config: " + config_path);
      try {
        in >> cfg;
      } catch (const json::parse_error& e) {
        throw CliError(2, std::string("config parse error: ") + e.what());
      }
    }
    // a manifest embeds the original config; unwrap for exact re-runs
    if (cfg.contains("config") && cfg.contains("command")) cfg = cfg["config"];

    Run run;
    run.config = cfg;
    run.quiet = quiet;
    const json exec = cfg.contains("execution") ? cfg["execution"] : json::object();
    run.seed = have_seed ? seed_override
                         : static_cast<std::uint64_t>(number_or(exec, "seed", 1));
    run.workers = workers_override > 0
                      ? workers_override
                      : static_cast<int>(number_or(exec, "workers", 1));
    run.out_dir = !out_override.empty()
                      ? out_override
                      : (exec.contains("out") ? exec["out"].get<std::string>()
                                              : "out");
    std::filesystem::create_directories(run.out_dir);

    int rc = 0;
    if (sim->parsed()) {
      run.command = "simulate";
      cmd_simulate(run);
    } else if (rate->parsed()) {
      run.command = "rate";
      cmd_rate(run);
    } else if (verify->parsed()) {
      run.command = "verify";
      rc = cmd_verify(run);
    } else if (diagnose->parsed()) {
      run.command = "diagnose";
      cmd_diagnose(run);
    } else if (check->parsed()) {
      run.command = "check";
      cmd_check(run);
    }
    write_manifest(run);
    return rc;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
