#include "qdd/sweep.hpp"

#include <chrono>
#include <cmath>

#include <omp.h>

namespace qdd {

void apply_parameter(ModelParams& p, const std::string& name, double value) {
  if (name == "gamma_L") p.left.gamma = value;
  else if (name == "gamma_R") p.right.gamma = value;
  else if (name == "w_L") p.left.width = value;
  else if (name == "w_R") p.right.width = value;
  else throw ValidationError("sweep parameter must be one of gamma_L, gamma_R, w_L, w_R (got '" + name + "')");
}

void SweepSpec::validate() const {
  for (const SweepAxis* a : {&x, &y}) {
    ModelParams probe;
    apply_parameter(probe, a->name, 1.0);
    if (a->values.empty()) throw ValidationError("sweep axis " + a->name + " has no values");
    for (double v : a->values)
      if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("sweep values for " + a->name + " must be > 0");
  }
  if (x.name == y.name) throw ValidationError("sweep axes must be distinct");
  base.validate();
  grid.validate();
  spectral.validate();
}

std::vector<double> log_space(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi > 0.0)) throw ValidationError("log_space: need n >= 1 and positive bounds");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

SweepCell run_cell(const SweepSpec& spec, double x, double y) {
  SweepCell c;
  c.x = x;
  c.y = y;
  try {
    ModelParams p = spec.base;
    apply_parameter(p, spec.x.name, x);
    apply_parameter(p, spec.y.name, y);
    EvolveOptions opt;
    opt.grid = spec.grid;
    opt.spectral = spec.spectral;
    opt.backend = spec.backend;
    opt.execution = Execution::Serial;
    opt.steady_window = spec.steady_window;
    opt.steady_tol = spec.steady_tol;
    const EvolveResult r = evolve(p, opt);
    const ObservableSummary& s = r.summary;
    c.peak_c_l1 = s.peak_c_l1;
    c.peak_time = s.peak_time;
    c.steady_c_l1 = s.steady_c_l1;
    c.steady_current = s.steady_current;
    c.steady_mi = s.steady_mi;
    c.converged = s.converged;
    c.steady_onset = s.steady_onset.value_or(-1.0);
  } catch (const std::exception& e) {
    c.error = e.what();
  }
  return c;
}

SweepResult run_sweep(const SweepSpec& spec, Execution mode) {
  spec.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const int nx = static_cast<int>(spec.x.values.size());
  const int ny = static_cast<int>(spec.y.values.size());
  const int total = nx * ny;
  SweepResult res;
  res.spec = spec;
  res.cells.resize(total);
  res.workers = mode == Execution::Parallel ? worker_count() : 1;

  if (mode == Execution::Serial) {
    for (int c = 0; c < total; ++c) res.cells[c] = run_cell(spec, spec.x.values[c / ny], spec.y.values[c % ny]);
  } else {
#pragma omp parallel for schedule(dynamic, 1) num_threads(res.workers)
    for (int c = 0; c < total; ++c) res.cells[c] = run_cell(spec, spec.x.values[c / ny], spec.y.values[c % ny]);
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace qdd
