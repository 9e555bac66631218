#include "qdd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "json.hpp"

namespace qdd {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::vector<double> CsvTable::column(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] != name) continue;
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[j]);
    return out;
  }
  throw ValidationError("no column named '" + name + "'");
}

void write_csv(const CsvTable& t, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << t.columns[j];
  os << '\n';
  for (const auto& r : t.rows) {
    if (r.size() != t.columns.size()) throw ValidationError("row width does not match header in " + path);
    for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << format_double(r[j]);
    os << '\n';
  }
  if (!os) throw IoError("write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path + " for reading");
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw IoError(path + ": missing header row");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
  }
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      // strtod accepts nan/inf, which from_chars also parses but less portably.
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw IoError(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != t.columns.size())
      throw IoError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.columns.size()) + " fields");
    t.rows.push_back(std::move(row));
  }
  return t;
}

Mode parse_mode(const std::string& s) {
  if (s == "evolve") return Mode::Evolve;
  if (s == "closed") return Mode::Closed;
  if (s == "sweep") return Mode::Sweep;
  if (s == "oracle-check") return Mode::OracleCheck;
  throw ValidationError("mode must be one of evolve, closed, sweep, oracle-check (got '" + s + "')");
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Evolve: return "evolve";
    case Mode::Closed: return "closed";
    case Mode::Sweep: return "sweep";
    case Mode::OracleCheck: return "oracle-check";
  }
  return "?";
}

Backend parse_backend(const std::string& s) {
  if (s == "aux-ode") return Backend::AuxOde;
  if (s == "volterra") return Backend::Volterra;
  throw ValidationError("backend must be aux-ode or volterra (got '" + s + "')");
}

const char* backend_name(Backend b) { return b == Backend::AuxOde ? "aux-ode" : "volterra"; }

void RunConfig::validate() const {
  model.validate();
  grid.validate();
  spectral.validate();
  if (!(steady_window > 0.0)) throw ValidationError("steady_window must be > 0");
  if (!(steady_tol > 0.0)) throw ValidationError("steady_tol must be > 0");
  if (mode == Mode::Sweep) {
    if (!sweep) throw ValidationError("mode sweep requires a sweep block");
    sweep->validate();
  }
  if (mode == Mode::OracleCheck) {
    if (oracle.modes < 2) throw ValidationError("oracle_modes must be >= 2");
    if (!(oracle.cutoff > 0.0)) throw ValidationError("oracle_cutoff must be > 0");
    if (!(oracle.horizon > 0.0)) throw ValidationError("oracle_horizon must be > 0");
    if (!(oracle.sample_dt > 0.0)) throw ValidationError("oracle_dt must be > 0");
  }
}

namespace {

std::string where(const YAML::Node& n) {
  return "line " + std::to_string(n.Mark().line + 1);
}

double as_double(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    throw ValidationError(where(n) + ": " + key + " must be a number");
  }
}

int as_int(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<int>();
  } catch (const YAML::Exception&) {
    throw ValidationError(where(n) + ": " + key + " must be an integer");
  }
}

std::string as_string(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<std::string>();
  } catch (const YAML::Exception&) {
    throw ValidationError(where(n) + ": " + key + " must be a string");
  }
}

std::optional<double> as_beta(const YAML::Node& n, const std::string& key) {
  const std::string s = as_string(n, key);
  if (s == "inf" || s == "zero-temperature") return std::nullopt;
  return as_double(n, key);
}

Mat2 initial_state(const std::string& s, const YAML::Node& n) {
  if (s.size() != 2 || (s[0] != '0' && s[0] != '1') || (s[1] != '0' && s[1] != '1'))
    throw ValidationError(where(n) + ": initial_state must be one of 00, 01, 10, 11");
  Mat2 occ = Mat2::Zero();
  occ(0, 0) = s[0] == '1' ? 1.0 : 0.0;
  occ(1, 1) = s[1] == '1' ? 1.0 : 0.0;
  return occ;
}

SweepAxis read_axis(const YAML::Node& block, const std::string& axis) {
  SweepAxis a;
  const YAML::Node name = block[axis];
  if (!name) throw ValidationError("sweep block needs key '" + axis + "'");
  a.name = as_string(name, axis);
  const YAML::Node values = block[axis + "_values"];
  const YAML::Node range = block[axis + "_range"];
  if (values && range) throw ValidationError("sweep: give either " + axis + "_values or " + axis + "_range");
  if (values) {
    if (!values.IsSequence()) throw ValidationError(where(values) + ": " + axis + "_values must be a list");
    for (const auto& v : values) a.values.push_back(as_double(v, axis + "_values"));
  } else if (range) {
    if (!range.IsSequence() || range.size() != 3)
      throw ValidationError(where(range) + ": " + axis + "_range must be [min, max, count]");
    const double lo = as_double(range[0], axis + "_range");
    const double hi = as_double(range[1], axis + "_range");
    const int n = as_int(range[2], axis + "_range");
    if (!(lo > 0.0) || !(hi >= lo) || n < 1)
      throw ValidationError(where(range) + ": " + axis + "_range needs 0 < min <= max and count >= 1");
    a.values = log_space(lo, hi, n);
  } else {
    throw ValidationError("sweep block needs " + axis + "_values or " + axis + "_range");
  }
  return a;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ValidationError("config parse error at line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  RunConfig cfg;
  if (root.IsNull()) return cfg;
  if (!root.IsMap()) throw ValidationError("config must be a key-value mapping");

  std::optional<double> horizon;
  std::optional<double> sweep_dt, sweep_horizon;
  bool has_sweep = false;
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    ModelParams& m = cfg.model;
    if (key == "mode") cfg.mode = parse_mode(as_string(v, key));
    else if (key == "eps11") m.eps11 = as_double(v, key);
    else if (key == "eps22") m.eps22 = as_double(v, key);
    else if (key == "eps12") m.eps12.real(as_double(v, key));
    else if (key == "eps12_im") m.eps12.imag(as_double(v, key));
    else if (key == "gamma_L") m.left.gamma = as_double(v, key);
    else if (key == "gamma_R") m.right.gamma = as_double(v, key);
    else if (key == "w_L") m.left.width = as_double(v, key);
    else if (key == "w_R") m.right.width = as_double(v, key);
    else if (key == "mu_L") m.left.mu = as_double(v, key);
    else if (key == "mu_R") m.right.mu = as_double(v, key);
    else if (key == "beta_L") m.left.beta = as_beta(v, key);
    else if (key == "beta_R") m.right.beta = as_beta(v, key);
    else if (key == "initial_state") m.initial_occupation = initial_state(as_string(v, key), v);
    else if (key == "dt") cfg.grid.dt = as_double(v, key);
    else if (key == "horizon") horizon = as_double(v, key);
    else if (key == "quad_nodes") cfg.spectral.nodes = as_int(v, key);
    else if (key == "quad_cutoff") cfg.spectral.cutoff = as_double(v, key);
    else if (key == "backend") cfg.backend = parse_backend(as_string(v, key));
    else if (key == "steady_window") cfg.steady_window = as_double(v, key);
    else if (key == "steady_tol") cfg.steady_tol = as_double(v, key);
    else if (key == "out") cfg.out_dir = as_string(v, key);
    else if (key == "dump_greens") cfg.dump_greens = v.as<bool>();
    else if (key == "oracle_modes") cfg.oracle.modes = as_int(v, key);
    else if (key == "oracle_cutoff") cfg.oracle.cutoff = as_double(v, key);
    else if (key == "oracle_horizon") cfg.oracle.horizon = as_double(v, key);
    else if (key == "oracle_dt") cfg.oracle.sample_dt = as_double(v, key);
    else if (key == "oracle_tol") cfg.oracle.tolerance = as_double(v, key);
    else if (key == "sweep") {
      if (!v.IsMap()) throw ValidationError(where(v) + ": sweep must be a mapping");
      has_sweep = true;
      static const std::set<std::string> known{"x", "y", "x_values", "y_values", "x_range", "y_range", "dt", "horizon"};
      for (const auto& skv : v) {
        const std::string sk = skv.first.as<std::string>();
        if (!known.count(sk)) throw ValidationError(where(skv.first) + ": unknown sweep key '" + sk + "'");
      }
      if (v["dt"]) sweep_dt = as_double(v["dt"], "sweep.dt");
      if (v["horizon"]) sweep_horizon = as_double(v["horizon"], "sweep.horizon");
      SweepSpec s;
      s.x = read_axis(v, "x");
      s.y = read_axis(v, "y");
      cfg.sweep = s;
    } else {
      throw ValidationError(where(kv.first) + ": unknown key '" + key + "'");
    }
  }

  if (!(cfg.grid.dt > 0.0)) throw ValidationError("dt must be > 0");
  if (horizon) {
    if (!(*horizon > 0.0)) throw ValidationError("horizon must be > 0");
    cfg.grid = TimeGrid::from_horizon(cfg.grid.dt, *horizon);
  } else {
    cfg.grid = TimeGrid::from_horizon(cfg.grid.dt, 12.0);
  }
  if (has_sweep) {
    SweepSpec& s = *cfg.sweep;
    s.base = cfg.model;
    s.spectral = cfg.spectral;
    s.backend = cfg.backend;
    s.steady_window = cfg.steady_window;
    s.steady_tol = cfg.steady_tol;
    const double dt = sweep_dt.value_or(0.01);
    if (!(dt > 0.0)) throw ValidationError("sweep.dt must be > 0");
    s.grid = TimeGrid::from_horizon(dt, sweep_horizon.value_or(12.0));
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

const std::vector<std::string>& evolve_columns() {
  static const std::vector<std::string> cols{"t",    "rho11", "rho22",  "rho33",   "rho44", "re_rho23",
                                             "im_rho23", "c_l1", "c_re", "purity", "entropy", "mi",
                                             "n1",   "n2",    "i_left", "i_right"};
  return cols;
}

CsvTable evolve_table(const EvolveResult& r) {
  CsvTable t(evolve_columns());
  const ObservableSeries& o = r.observables;
  for (std::size_t k = 0; k < r.rho.rho.size(); ++k) {
    const Mat4& rho = r.rho.rho[k];
    t.rows.push_back({r.rho.grid.time(static_cast<int>(k)), rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real(),
                      rho(3, 3).real(), rho(1, 2).real(), rho(1, 2).imag(), o.c_l1[k], o.c_rel_entropy[k],
                      o.purity[k], o.von_neumann_entropy[k], o.mutual_information[k], o.n1[k], o.n2[k],
                      o.current_left[k], o.current_right[k]});
  }
  return t;
}

void write_series(const EvolveResult& r, const std::string& path) { write_csv(evolve_table(r), path); }

void write_observables(const ObservableSeries& o, const std::string& path) {
  CsvTable t({"t", "c_l1", "c_rel_entropy", "purity", "von_neumann_entropy", "shannon_entropy",
              "mutual_information", "correlated_coherence", "bloch_x", "bloch_y", "bloch_z", "current_left",
              "current_right", "n1", "n2"});
  for (std::size_t k = 0; k < o.c_l1.size(); ++k)
    t.rows.push_back({o.grid.time(static_cast<int>(k)), o.c_l1[k], o.c_rel_entropy[k], o.purity[k],
                      o.von_neumann_entropy[k], o.shannon_entropy[k], o.mutual_information[k],
                      o.correlated_coherence[k], o.bloch_x[k], o.bloch_y[k], o.bloch_z[k], o.current_left[k],
                      o.current_right[k], o.n1[k], o.n2[k]});
  write_csv(t, path);
}

namespace {

json params_json(const ModelParams& p) {
  auto res = [](const ReservoirParams& r) {
    json j{{"gamma", r.gamma}, {"w", r.width}, {"mu", r.mu}};
    j["beta"] = r.beta ? json(*r.beta) : json("inf");
    return j;
  };
  return {{"eps11", p.eps11},
          {"eps22", p.eps22},
          {"eps12", {p.eps12.real(), p.eps12.imag()}},
          {"left", res(p.left)},
          {"right", res(p.right)},
          {"initial_occupation", {p.initial_occupation(0, 0).real(), p.initial_occupation(1, 1).real()}}};
}

void write_json(const json& j, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << j.dump(2) << '\n';
  if (!os) throw IoError("write failed for " + path);
}

}  // namespace

void write_summary_json(const EvolveResult& r, const RunConfig& cfg, const std::string& path) {
  const ObservableSummary& s = r.summary;
  json j;
  j["params"] = params_json(cfg.model);
  j["grid"] = {{"dt", r.propagator.grid.dt}, {"n_steps", r.propagator.grid.n_steps}};
  j["quadrature"] = {{"nodes", cfg.spectral.nodes}, {"cutoff", cfg.spectral.cutoff}};
  j["backend"] = backend_name(cfg.backend);
  j["peak_c_l1"] = s.peak_c_l1;
  j["peak_time"] = s.peak_time;
  j["min_purity"] = s.min_purity;
  j["min_purity_time"] = s.min_purity_time;
  j["max_entropy"] = s.max_entropy;
  j["max_entropy_time"] = s.max_entropy_time;
  j["steady"] = {{"converged", s.converged},
                 {"onset_time", s.steady_onset ? json(*s.steady_onset) : json(nullptr)},
                 {"c_l1", s.steady_c_l1},
                 {"current_left", s.steady_current},
                 {"current_right", s.steady_current_right},
                 {"mi", s.steady_mi},
                 {"n1", s.steady_n1},
                 {"n2", s.steady_n2}};
  j["checks"] = {{"sum_rule", r.sum_rule},
                 {"trace_error", r.physical.trace_error},
                 {"min_eigenvalue", r.physical.min_eigenvalue},
                 {"forbidden_offdiagonal", r.physical.forbidden}};
  j["currents_one_sided_ends"] = true;
  write_json(j, path);
}

void write_closed(const ClosedSeries& s, const std::string& path) {
  CsvTable t({"t", "c_l1", "bloch_x", "bloch_y", "bloch_z"});
  for (std::size_t k = 0; k < s.c_l1.size(); ++k)
    t.rows.push_back({s.grid.time(static_cast<int>(k)), s.c_l1[k], s.bloch_x[k], s.bloch_y[k], s.bloch_z[k]});
  write_csv(t, path);
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols{"x", "y", "peak_c_l1", "peak_time", "steady_c_l1",
                                             "steady_current_mag", "steady_mi", "steady_onset_time",
                                             "converged"};
  return cols;
}

void write_sweep(const SweepResult& r, const std::string& path) {
  CsvTable t(sweep_columns());
  for (const SweepCell& c : r.cells) {
    const double nan = std::nan("");
    if (!c.error.empty()) {
      t.rows.push_back({c.x, c.y, nan, nan, nan, nan, nan, nan, 0.0});
      continue;
    }
    t.rows.push_back({c.x, c.y, c.peak_c_l1, c.peak_time, c.steady_c_l1, c.steady_current, c.steady_mi,
                      c.converged ? c.steady_onset : nan, c.converged ? 1.0 : 0.0});
  }
  write_csv(t, path);
}

void write_sweep_json(const SweepResult& r, const std::string& path) {
  json j;
  const SweepSpec& s = r.spec;
  j["x"] = {{"name", s.x.name}, {"values", s.x.values}};
  j["y"] = {{"name", s.y.name}, {"values", s.y.values}};
  j["base"] = params_json(s.base);
  j["grid"] = {{"dt", s.grid.dt}, {"n_steps", s.grid.n_steps}};
  j["quadrature"] = {{"nodes", s.spectral.nodes}, {"cutoff", s.spectral.cutoff}};
  j["backend"] = backend_name(s.backend);
  j["steady"] = {{"window", s.steady_window}, {"tol", s.steady_tol}};
  j["columns"] = sweep_columns();
  j["code_version"] = "qdd 1.0.0";
  j["timing_seconds"] = r.seconds;
  j["workers"] = r.workers;
  json errors = json::array();
  for (std::size_t i = 0; i < r.cells.size(); ++i)
    if (!r.cells[i].error.empty()) errors.push_back({{"cell", i}, {"error", r.cells[i].error}});
  j["cell_errors"] = errors;
  write_json(j, path);
}

void write_greens_csv(const PropagatorGrid& pg, const std::string& path) {
  CsvTable t({"t", "re_u11", "im_u11", "re_u12", "im_u12", "re_u21", "im_u21", "re_u22", "im_u22"});
  for (int k = 0; k < pg.size(); ++k) {
    const Mat2 u = pg.u(k);
    t.rows.push_back({pg.grid.time(k), u(0, 0).real(), u(0, 0).imag(), u(0, 1).real(), u(0, 1).imag(),
                      u(1, 0).real(), u(1, 0).imag(), u(1, 1).real(), u(1, 1).imag()});
  }
  write_csv(t, path);
}

}  // namespace qdd
