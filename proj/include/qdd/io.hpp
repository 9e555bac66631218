#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdd/closed_system.hpp"
#include "qdd/sweep.hpp"

namespace qdd {

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> cols) : columns(std::move(cols)) {}
  std::vector<double> column(const std::string& name) const;
};

/// Header row plus one line per row, 17 significant digits. Throws IoError.
void write_csv(const CsvTable& t, const std::string& path);
CsvTable read_csv(const std::string& path);

enum class Mode { Evolve, Closed, Sweep, OracleCheck };

struct OracleSettings {
  int modes = 400;
  double cutoff = 10.0;
  double horizon = 2.0;
  double sample_dt = 0.1;
  double tolerance = 5e-3;
};

struct RunConfig {
  Mode mode = Mode::Evolve;
  ModelParams model;
  TimeGrid grid;
  SpectralConfig spectral;
  Backend backend = Backend::AuxOde;
  double steady_window = 1.0;
  double steady_tol = 1e-4;
  std::optional<SweepSpec> sweep;
  OracleSettings oracle;
  std::string out_dir = "out";
  bool dump_greens = false;

  void validate() const;
};

/// Flat YAML mapping; an optional `sweep:` block holds the sweep axes.
/// Parse errors carry the line number; validation errors name the key.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

Mode parse_mode(const std::string& s);
const char* mode_name(Mode m);
Backend parse_backend(const std::string& s);
const char* backend_name(Backend b);

/// Evolve table: t, rho11, rho22, rho33, rho44, re_rho23, im_rho23, c_l1,
/// c_re, purity, entropy, mi, n1, n2, i_left, i_right.
const std::vector<std::string>& evolve_columns();
CsvTable evolve_table(const EvolveResult& r);
void write_series(const EvolveResult& r, const std::string& path);
/// Wide table with every observable series (Bloch, CC, Shannon entropy).
void write_observables(const ObservableSeries& o, const std::string& path);
void write_summary_json(const EvolveResult& r, const RunConfig& cfg, const std::string& path);

void write_closed(const ClosedSeries& s, const std::string& path);

/// Long format, one row per cell: x, y, peak_c_l1, peak_time, steady_c_l1,
/// steady_current_mag, steady_mi, steady_onset_time, converged, plus the
/// axis names in the JSON sidecar.
const std::vector<std::string>& sweep_columns();
void write_sweep(const SweepResult& r, const std::string& path);
void write_sweep_json(const SweepResult& r, const std::string& path);

/// t, Re/Im of u11, u12, u21, u22.
void write_greens_csv(const PropagatorGrid& pg, const std::string& path);

std::string format_double(double x);

}  // namespace qdd
