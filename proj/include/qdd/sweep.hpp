#pragma once

#include <string>
#include <vector>

#include "qdd/pipeline.hpp"

namespace qdd {

struct SweepAxis {
  std::string name;  // one of gamma_L, gamma_R, w_L, w_R
  std::vector<double> values;
};

struct SweepSpec {
  SweepAxis x{"w_L", {}};
  SweepAxis y{"w_R", {}};
  ModelParams base;
  TimeGrid grid{0.01, 1200};
  SpectralConfig spectral;
  Backend backend = Backend::AuxOde;
  double steady_window = 1.0;
  double steady_tol = 1e-4;

  void validate() const;
};

struct SweepCell {
  double x = 0.0;
  double y = 0.0;
  double peak_c_l1 = 0.0;
  double peak_time = 0.0;
  double steady_c_l1 = 0.0;
  double steady_current = 0.0;
  double steady_mi = 0.0;
  double steady_onset = -1.0;  // −1 when no steady state was detected
  bool converged = false;
  std::string error;  // non-empty when the cell's solve failed
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepCell> cells;  // x-major: cell (i, j) at i * ny + j
  double seconds = 0.0;
  int workers = 1;

  const SweepCell& at(int i, int j) const { return cells[i * spec.y.values.size() + j]; }
};

/// Sets a swept parameter by name; throws ValidationError for unknown names.
void apply_parameter(ModelParams& p, const std::string& name, double value);

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, int n);

/// Every cell runs the full evolve pipeline. Cells are independent and are
/// written into fixed slots, so the table is identical for any worker count.
SweepResult run_sweep(const SweepSpec& spec, Execution mode = Execution::Parallel);

/// One cell, exposed for tests and benchmarks.
SweepCell run_cell(const SweepSpec& spec, double x, double y);

}  // namespace qdd
