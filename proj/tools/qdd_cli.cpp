// qdd: command-line front end (evolve, closed, sweep, oracle-check).
#include <cmath>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "qdd/io.hpp"
#include "qdd/oracle.hpp"

namespace fs = std::filesystem;
using namespace qdd;

namespace {

struct Overrides {
  std::string config;
  std::string out;
  double dt = 0.0;
  double horizon = 0.0;
  int quad_nodes = 0;
  std::string backend;
  bool dump_greens = false;
};

RunConfig resolve(Mode mode, const Overrides& o) {
  RunConfig cfg = o.config.empty() ? parse_config("") : load_config(o.config);
  cfg.mode = mode;
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (!o.backend.empty()) cfg.backend = parse_backend(o.backend);
  if (o.quad_nodes != 0) cfg.spectral.nodes = o.quad_nodes;
  if (o.dump_greens) cfg.dump_greens = true;

  TimeGrid& g = (mode == Mode::Sweep && cfg.sweep) ? cfg.sweep->grid : cfg.grid;
  const double dt = o.dt != 0.0 ? o.dt : g.dt;
  const double horizon = o.horizon != 0.0 ? o.horizon : g.horizon();
  if (!(dt > 0.0)) throw ValidationError("--dt must be > 0");
  if (!(horizon > 0.0)) throw ValidationError("--horizon must be > 0");
  g = TimeGrid::from_horizon(dt, horizon);
  if (cfg.sweep) {
    cfg.sweep->spectral = cfg.spectral;
    cfg.sweep->backend = cfg.backend;
  }
  cfg.validate();
  return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& file) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out_dir + ": " + ec.message());
  return (fs::path(cfg.out_dir) / file).string();
}

int run_evolve(const RunConfig& cfg) {
  EvolveOptions opt;
  opt.grid = cfg.grid;
  opt.spectral = cfg.spectral;
  opt.backend = cfg.backend;
  opt.steady_window = cfg.steady_window;
  opt.steady_tol = cfg.steady_tol;
  const EvolveResult r = evolve(cfg.model, opt);
  write_series(r, out_path(cfg, "evolve.csv"));
  write_observables(r.observables, out_path(cfg, "observables.csv"));
  write_summary_json(r, cfg, out_path(cfg, "summary.json"));
  if (cfg.dump_greens) {
    write_greens_csv(r.propagator, out_path(cfg, "greens.csv"));
    write_noise_csv(r.noise, out_path(cfg, "noise.csv"));
  }
  std::cout << "peak C_l1 " << r.summary.peak_c_l1 << " at t=" << r.summary.peak_time << "\n"
            << "steady C_l1 " << r.summary.steady_c_l1 << (r.summary.converged ? "" : " (not converged)") << "\n"
            << "sum rule residual " << r.sum_rule << "\n";
  return 0;
}

int run_closed(const RunConfig& cfg) {
  const ClosedParams cp = ClosedParams::from(cfg.model);
  const ClosedSeries s = closed_coherence_series(cp, cfg.grid);
  write_closed(s, out_path(cfg, "closed.csv"));
  if (const auto tr = revival_time(cp))
    std::cout << "revival time " << *tr << "\n";
  else
    std::cout << "no revival (Rabi frequency is zero)\n";
  const CuspReport c = detect_cusp(cp, cfg.grid.dt);
  std::cout << "cusp " << (c.cusp ? "present" : "absent") << "\n";
  return 0;
}

int run_sweep_mode(const RunConfig& cfg) {
  const SweepResult r = run_sweep(*cfg.sweep);
  write_sweep(r, out_path(cfg, "sweep.csv"));
  write_sweep_json(r, out_path(cfg, "sweep.json"));
  int failed = 0;
  for (const auto& c : r.cells) failed += !c.error.empty();
  std::cout << r.cells.size() << " cells in " << r.seconds << " s";
  if (failed) std::cout << ", " << failed << " failed";
  std::cout << "\n";
  return 0;
}

int run_oracle(const RunConfig& cfg) {
  const OracleSettings& o = cfg.oracle;
  const TimeGrid sample = TimeGrid::from_horizon(o.sample_dt, o.horizon);
  const int stride = std::max(1, static_cast<int>(std::lround(o.sample_dt / cfg.grid.dt)));
  const TimeGrid fine{cfg.grid.dt, sample.n_steps * stride};

  EvolveOptions opt;
  opt.grid = fine;
  opt.spectral = cfg.spectral;
  opt.backend = cfg.backend;
  const EvolveResult r = evolve(cfg.model, opt);
  const auto bl = discretize_bath(Reservoir::Left, o.modes, cfg.model, o.cutoff);
  const auto br = discretize_bath(Reservoir::Right, o.modes, cfg.model, o.cutoff);
  const auto exact = exact_greens(bl, br, cfg.model, TimeGrid{fine.dt * stride, sample.n_steps});

  double du = 0, dv = 0, dvb = 0, drho = 0, wick = 0;
  for (int k = 0; k < static_cast<int>(exact.size()); ++k) {
    const int j = k * stride;
    du = std::max(du, (exact[k].u - r.propagator.u(j)).cwiseAbs().maxCoeff());
    dv = std::max(dv, (exact[k].v - r.noise.v[j]).cwiseAbs().maxCoeff());
    dvb = std::max(dvb, (exact[k].vbar - r.noise.vbar[j]).cwiseAbs().maxCoeff());
    drho = std::max(drho, (exact[k].rho - r.rho.rho[j]).cwiseAbs().maxCoeff());
    wick = std::max(wick, std::abs(exact[k].quartic - quartic_noise_average(exact[k].v, exact[k].vbar)));
  }
  bool ok = true;
  auto line = [&](const char* what, double err, double tol) {
    const bool pass = err < tol;
    ok = ok && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << what << " max discrepancy " << err << " (tol " << tol << ")\n";
  };
  line("u", du, o.tolerance);
  line("v", dv, o.tolerance);
  line("vbar", dvb, o.tolerance);
  line("rho", drho, o.tolerance);
  line("wick identity", wick, 1e-12);
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact non-Markovian dynamics of a serial double quantum dot"};
  app.require_subcommand(1);
  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "YAML configuration file");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--dt", o.dt, "time step [1/Γ]");
    sub->add_option("--horizon", o.horizon, "final time [1/Γ]");
    sub->add_option("--quad-nodes", o.quad_nodes, "energy quadrature nodes per reservoir core");
    sub->add_option("--backend", o.backend, "propagator backend")->check(CLI::IsMember({"aux-ode", "volterra"}));
    sub->add_flag("--dump-greens", o.dump_greens, "also write u(t), v(t), v̄(t) tables");
  };
  CLI::App* evolve_cmd = app.add_subcommand("evolve", "open-system time evolution");
  CLI::App* closed_cmd = app.add_subcommand("closed", "isolated double dot");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter sweep over two couplings or widths");
  CLI::App* oracle_cmd = app.add_subcommand("oracle-check", "compare against a discretized-bath solution");
  for (CLI::App* sub : {evolve_cmd, closed_cmd, sweep_cmd, oracle_cmd}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*evolve_cmd) return run_evolve(resolve(Mode::Evolve, o));
    if (*closed_cmd) return run_closed(resolve(Mode::Closed, o));
    if (*sweep_cmd) return run_sweep_mode(resolve(Mode::Sweep, o));
    if (*oracle_cmd) return run_oracle(resolve(Mode::OracleCheck, o));
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
