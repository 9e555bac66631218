// Acceptance checks. Usage: qdd_acceptance [N ...]; no argument runs all.
// One PASS/FAIL line per criterion; exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qdd/closed_system.hpp"
#include "qdd/oracle.hpp"
#include "qdd/pipeline.hpp"
#include "qdd/sweep.hpp"

using namespace qdd;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

EvolveResult run(const ModelParams& p, double dt, double horizon, int nodes = SpectralConfig{}.nodes) {
  EvolveOptions opt;
  opt.grid = TimeGrid::from_horizon(dt, horizon);
  opt.spectral.nodes = nodes;
  return evolve(p, opt);
}

template <class V>
int argmax(const V& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Revival period of the isolated block.
Outcome revival() {
  Stopwatch sw;
  const double t04 = *revival_time({3.0, 2.0, 0.4});
  const double t10 = *revival_time({3.0, 2.0, 1.0});
  const double secs = sw.seconds();
  const bool ok = std::abs(t04 - 4.9) / 4.9 < 0.02 && std::abs(t10 - 2.8) / 2.8 < 0.02 && secs < 1.0;
  return {ok, fmt("T_R(0.4)=%.4f T_R(1.0)=%.4f (%.3g s)", t04, t10, secs)};
}

// Isolated-block coherence maximum and the cusp.
Outcome closed_coherence() {
  Stopwatch sw;
  const ClosedParams weak{3.0, 2.0, 0.4};
  const auto s = closed_coherence_series(weak, TimeGrid::from_horizon(1e-4, *revival_time(weak)));
  const double cmax = *std::max_element(s.c_l1.begin(), s.c_l1.end());
  const bool cusp_strong = detect_cusp({3.0, 2.0, 1.0}, 1e-3).cusp;
  const bool cusp_weak = detect_cusp(weak, 1e-3).cusp;
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(0.4 + 0.001 * i);
  const auto th = cusp_threshold(3.0, 2.0, grid);
  const double secs = sw.seconds();
  const bool ok = cmax >= 0.99 && cusp_strong && !cusp_weak && th && *th >= 0.48 && *th <= 0.52 && secs < 5.0;
  return {ok, fmt("max C(0.4)=%.6f (need >= 0.99), cusp(1.0)=%d cusp(0.4)=%d, threshold=%.3f (%.3g s)", cmax,
                  cusp_strong, cusp_weak, th ? *th : std::nan(""), secs)};
}

// Discretized-bath equivalence at 400 modes per reservoir.
Outcome oracle_equivalence() {
  Stopwatch sw;
  ModelParams p;
  EvolveOptions opt;
  opt.grid = TimeGrid::from_horizon(1e-3, 2.0);
  const auto res = evolve(p, opt);
  const auto ev = make_exact(discretize_bath(Reservoir::Left, 400, p), discretize_bath(Reservoir::Right, 400, p), p);
  double eu = 0.0, ev_ = 0.0, evb = 0.0, er = 0.0, wick = 0.0;
  for (int k = 0; k < res.propagator.size(); k += 50) {
    const auto s = exact_at(ev, res.propagator.grid.time(k));
    eu = std::max(eu, (res.propagator.u(k) - s.u).cwiseAbs().maxCoeff());
    ev_ = std::max(ev_, (res.noise.v[k] - s.v).cwiseAbs().maxCoeff());
    evb = std::max(evb, (res.noise.vbar[k] - s.vbar).cwiseAbs().maxCoeff());
    er = std::max(er, (res.rho.rho[k] - s.rho).cwiseAbs().maxCoeff());
    wick = std::max(wick, std::abs(s.quartic - quartic_noise_average(s.v, s.vbar)));
  }
  double fock = 0.0;
  const auto fl = discretize_bath(Reservoir::Left, 4, p, 3.0);
  const auto fr = discretize_bath(Reservoir::Right, 4, p, 3.0);
  for (double t : {0.5, 1.0, 2.0}) {
    const auto fc = fock_space_check(fl, fr, p, t);
    fock = std::max({fock, fc.rho_error, fc.quartic_error});
  }
  const double secs = sw.seconds();
  const bool ok = eu < 5e-3 && ev_ < 5e-3 && er < 5e-3 && wick < 1e-12 && fock < 1e-12 && secs < 120.0;
  return {ok, fmt("u %.2e, v %.2e, vbar %.2e, rho %.2e, Wick %.2e, Fock %.2e (%.3g s)", eu, ev_, evb, er, wick, fock,
                  secs)};
}

Outcome sum_rule() {
  const auto res = run(ModelParams{}, 1e-3, 12.0);
  return {res.sum_rule < 1e-8, fmt("max residual %.3e", res.sum_rule)};
}

Outcome physicality_check() {
  const auto res = run(ModelParams{}, 1e-3, 12.0);
  const auto& r = res.physical;
  const bool ok = r.trace_error < 1e-10 && r.min_eigenvalue > -1e-8 && r.forbidden < 1e-10 && r.hermiticity < 1e-10;
  return {ok, fmt("trace %.2e, min eigenvalue %.2e, forbidden %.2e, hermiticity %.2e", r.trace_error,
                  r.min_eigenvalue, r.forbidden, r.hermiticity)};
}

// Long default run, long enough to reach the steady state.
const EvolveResult& long_run() {
  static const EvolveResult res = run(ModelParams{}, 5e-3, 60.0);
  return res;
}

Outcome open_peak() {
  const auto& res = long_run();
  const auto& s = res.summary;
  const double c0 = res.observables.c_l1.front();
  const bool ok = std::abs(s.peak_c_l1 - 0.45) <= 0.07 && c0 == 0.0 && s.converged && s.steady_c_l1 > 0.0;
  return {ok, fmt("peak %.5f at t=%.3f (need 0.45 +- 0.07), C(0)=%g, steady %.5f, converged=%d", s.peak_c_l1,
                  s.peak_time, c0, s.steady_c_l1, s.converged)};
}

Outcome current_identity() {
  const auto& res = long_run();
  const auto& s = res.summary;
  ModelParams p;
  const auto& o = res.observables;
  const int w = static_cast<int>(std::lround(1.0 / res.rho.grid.dt));
  const int last = static_cast<int>(o.current_left.size()) - 2;  // the final sample is one-sided
  double id = 0.0, sum = 0.0;
  for (int k = last - w; k <= last; ++k) {
    id = std::max(id, std::abs(o.current_left[k] - steady_current_from_coherence(res.rho.rho[k], p)));
    sum = std::max(sum, std::abs(o.current_left[k] + o.current_right[k]));
  }
  ModelParams zb;
  zb.left.mu = 0.0;
  zb.right.mu = 0.0;
  const auto z = run(zb, 5e-3, 60.0);
  const bool ok = s.converged && id < 1e-5 && sum < 1e-5 && z.summary.converged && z.summary.steady_current < 1e-4;
  return {ok, fmt("steady I_L=%.6f, identity %.2e, |I_L+I_R| %.2e, zero-bias |I| %.2e", s.steady_current, id, sum,
                  z.summary.steady_current)};
}

Outcome peak_coincidence() {
  const auto res = run(ModelParams{}, 1e-3, 30.0);
  const auto& o = res.observables;
  const int pur = static_cast<int>(std::min_element(o.purity.begin(), o.purity.end()) - o.purity.begin());
  const int ent = argmax(o.von_neumann_entropy);
  const int cr = argmax(o.c_rel_entropy);
  const int mi = argmax(o.mutual_information);
  const double dt = res.rho.grid.dt;
  const bool ok = std::abs(pur - ent) <= 1 && std::abs(cr - mi) <= 1;
  return {ok, fmt("purity min t=%.3f, entropy max t=%.3f (%d steps); C_r max t=%.3f, MI max t=%.3f (%d steps)",
                  pur * dt, ent * dt, std::abs(pur - ent), cr * dt, mi * dt, std::abs(cr - mi))};
}

Outcome ridge_alignment() {
  Stopwatch sw;
  SweepSpec spec;
  spec.x = {"w_L", {1.0, 3.0, 4.0, 30.0}};
  spec.y = {"w_R", log_space(0.5, 30.0, 25)};
  spec.grid = TimeGrid::from_horizon(0.01, 40.0);
  const auto r = run_sweep(spec);
  bool ok = true;
  std::ostringstream os;
  for (int i = 0; i < 4; ++i) {
    std::vector<double> c, cur, mi;
    for (int j = 0; j < 25; ++j) {
      const auto& cell = r.at(i, j);
      if (!cell.error.empty()) ok = false;
      c.push_back(cell.steady_c_l1);
      cur.push_back(cell.steady_current);
      mi.push_back(cell.steady_mi);
    }
    const int ic = argmax(c), ii = argmax(cur), im = argmax(mi);
    ok = ok && std::abs(ii - ic) <= 1 && std::abs(im - ic) <= 1;
    os << "W_L=" << spec.x.values[i] << ": C " << ic << " I " << ii << " MI " << im << "; ";
  }
  const double secs = sw.seconds();
  ok = ok && secs < 600.0;
  os << fmt("(%.1f s, %d workers)", secs, r.workers);
  return {ok, os.str()};
}

std::vector<std::pair<const char*, double>> scalars(const ObservableSummary& s) {
  return {{"peak_c_l1", s.peak_c_l1},       {"peak_time", s.peak_time},
          {"steady_c_l1", s.steady_c_l1},   {"steady_current", s.steady_current},
          {"steady_current_right", s.steady_current_right},
          {"steady_mi", s.steady_mi},       {"steady_n1", s.steady_n1},
          {"steady_n2", s.steady_n2},       {"min_purity", s.min_purity},
          {"min_purity_time", s.min_purity_time}, {"max_entropy", s.max_entropy},
          {"max_entropy_time", s.max_entropy_time}};
}

Outcome convergence() {
  ModelParams p;
  const auto base = scalars(run(p, 1e-3, 12.0).summary);
  const auto half = scalars(run(p, 5e-4, 12.0).summary);
  const auto dbl = scalars(run(p, 1e-3, 12.0, 2 * SpectralConfig{}.nodes).summary);
  double dd = 0.0, dn = 0.0;
  const char* wd = "";
  const char* wn = "";
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double a = std::abs(half[i].second - base[i].second);
    const double b = std::abs(dbl[i].second - base[i].second);
    if (a >= dd) dd = a, wd = base[i].first;
    if (b >= dn) dn = b, wn = base[i].first;
  }
  return {dd < 1e-3 && dn < 1e-3, fmt("halving dt: max change %.2e (%s); doubling nodes: %.2e (%s)", dd, wd, dn, wn)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{revival,          closed_coherence, oracle_equivalence,
                                                       sum_rule,         physicality_check, open_peak,
                                                       current_identity, peak_coincidence, ridge_alignment,
                                                       convergence};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) which.push_back(i);

  int failures = 0;
  for (int n : which) {
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::cerr << "no criterion " << n << "\n";
      return 64;
    }
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << o.detail << std::endl;
    failures += !o.pass;
  }
  return failures;
}
