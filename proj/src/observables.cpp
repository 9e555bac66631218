#include "qdd/observables.hpp"

#include <algorithm>
#include <cmath>

namespace qdd {

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

double entropy_of(const Eigen::VectorXd& p) {
  double s = 0.0;
  for (int i = 0; i < p.size(); ++i) s -= xlog2x(std::max(p[i], 0.0));
  return s;
}

Eigen::VectorXd diag_real(const Mat4& rho) { return rho.diagonal().real(); }

}  // namespace

double l1_coherence(const Mat4& rho) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) s += std::abs(rho(i, j));
  return s;
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  return entropy_of(es.eigenvalues());
}

double shannon_entropy_diagonal(const Mat4& rho) { return entropy_of(diag_real(rho)); }

double relative_entropy_coherence(const Mat4& rho) {
  return std::max(0.0, shannon_entropy_diagonal(rho) - von_neumann_entropy(rho));
}

double purity(const Mat4& rho) { return (rho * rho).trace().real(); }

double mutual_information(const Mat4& rho) {
  const Eigen::Matrix2d r1 = reduce_dot(rho, 1);
  const Eigen::Matrix2d r2 = reduce_dot(rho, 2);
  return entropy_of(r1.diagonal()) + entropy_of(r2.diagonal()) - von_neumann_entropy(rho);
}

double correlated_coherence(const Mat4& rho) {
  // Both reductions are diagonal, so their l1 coherence is identically zero.
  const Eigen::Matrix2d r1 = reduce_dot(rho, 1);
  const Eigen::Matrix2d r2 = reduce_dot(rho, 2);
  return l1_coherence(rho) - 2.0 * std::abs(r1(0, 1)) - 2.0 * std::abs(r2(0, 1));
}

BlochPoint bloch_coordinates(const Mat4& rho) {
  BlochPoint b;
  const double w = rho(1, 1).real() + rho(2, 2).real();
  if (!(w > 1e-12)) return b;
  b.x = 2.0 * rho(1, 2).real() / w;
  b.y = 2.0 * rho(1, 2).imag() / w;
  b.z = (rho(2, 2).real() - rho(1, 1).real()) / w;
  b.valid = true;
  return b;
}

double steady_current_from_coherence(const Mat4& rho, const ModelParams& p) {
  const cplx e12 = p.eps12;
  const cplx e21 = std::conj(e12);
  return (-kI * (e12 * rho(2, 1) - e21 * rho(1, 2))).real();
}

Currents particle_currents(const DensityMatrixSeries& dm, const ModelParams& p) {
  const int n = static_cast<int>(dm.rho.size());
  Currents c;
  c.left.assign(n, 0.0);
  c.right.assign(n, 0.0);
  if (n == 0) return c;
  const double h = dm.grid.dt;
  auto occ = [&](int k, int dot) {
    const Mat4& r = dm.rho[k];
    return dot == 1 ? (r(0, 0) + r(1, 1)).real() : (r(0, 0) + r(2, 2)).real();
  };
  auto deriv = [&](int k, int dot) {
    if (n < 2) return 0.0;
    if (k == 0) return (occ(1, dot) - occ(0, dot)) / h;
    if (k == n - 1) return (occ(n - 1, dot) - occ(n - 2, dot)) / h;
    return (occ(k + 1, dot) - occ(k - 1, dot)) / (2.0 * h);
  };
  const cplx e12 = p.eps12;
  const cplx e21 = std::conj(e12);
  for (int k = 0; k < n; ++k) {
    const Mat4& r = dm.rho[k];
    const cplx hop = -kI * (e12 * r(2, 1) - e21 * r(1, 2));
    c.max_imag_residue = std::max(c.max_imag_residue, std::abs(hop.imag()));
    // hop is the rate of transfer from dot 2 into dot 1.
    c.left[k] = hop.real() - deriv(k, 1);
    c.right[k] = -hop.real() - deriv(k, 2);
  }
  return c;
}

std::optional<int> detect_steady_state(const std::vector<const std::vector<double>*>& series, double dt,
                                       double window, double tol) {
  if (series.empty()) return std::nullopt;
  const int n = static_cast<int>(series.front()->size());
  const int w = std::max(1, static_cast<int>(std::lround(window / dt)));
  if (n < w + 1) return std::nullopt;

  // Scan backward: a window starting at k is quiet iff every series stays
  // within tol on [k, k + w]. Running extrema over the suffix make the
  // earliest qualifying start easy to find once the last window is quiet.
  std::optional<int> onset;
  for (int k = n - 1 - w; k >= 0; --k) {
    bool quiet = true;
    for (const auto* s : series) {
      const auto b = s->begin() + k;
      const auto [lo, hi] = std::minmax_element(b, b + w + 1);
      if (*hi - *lo >= tol) {
        quiet = false;
        break;
      }
    }
    if (!quiet) break;
    onset = k;
  }
  return onset;
}

ObservableSeries compute_observables(const DensityMatrixSeries& dm, const ModelParams& p) {
  const int n = static_cast<int>(dm.rho.size());
  ObservableSeries o;
  o.grid = dm.grid;
  for (auto* s : {&o.c_l1, &o.c_rel_entropy, &o.purity, &o.von_neumann_entropy, &o.shannon_entropy,
                  &o.mutual_information, &o.correlated_coherence, &o.bloch_x, &o.bloch_y, &o.bloch_z,
                  &o.n1, &o.n2})
    s->resize(n);
  for (int k = 0; k < n; ++k) {
    const Mat4& r = dm.rho[k];
    o.c_l1[k] = l1_coherence(r);
    o.c_rel_entropy[k] = relative_entropy_coherence(r);
    o.purity[k] = purity(r);
    o.von_neumann_entropy[k] = von_neumann_entropy(r);
    o.shannon_entropy[k] = shannon_entropy_diagonal(r);
    o.mutual_information[k] = mutual_information(r);
    o.correlated_coherence[k] = correlated_coherence(r);
    const BlochPoint b = bloch_coordinates(r);
    const double nan = std::nan("");
    o.bloch_x[k] = b.valid ? b.x : nan;
    o.bloch_y[k] = b.valid ? b.y : nan;
    o.bloch_z[k] = b.valid ? b.z : nan;
    o.n1[k] = (r(0, 0) + r(1, 1)).real();
    o.n2[k] = (r(0, 0) + r(2, 2)).real();
  }
  Currents c = particle_currents(dm, p);
  o.current_left = std::move(c.left);
  o.current_right = std::move(c.right);
  return o;
}

ObservableSummary summarize(const ObservableSeries& o, double window, double tol) {
  ObservableSummary s;
  const int n = static_cast<int>(o.c_l1.size());
  if (n == 0) return s;
  const double dt = o.grid.dt;

  const auto peak = std::max_element(o.c_l1.begin(), o.c_l1.end());
  s.peak_c_l1 = *peak;
  s.peak_time = dt * static_cast<double>(peak - o.c_l1.begin());
  const auto pmin = std::min_element(o.purity.begin(), o.purity.end());
  s.min_purity = *pmin;
  s.min_purity_time = dt * static_cast<double>(pmin - o.purity.begin());
  const auto emax = std::max_element(o.von_neumann_entropy.begin(), o.von_neumann_entropy.end());
  s.max_entropy = *emax;
  s.max_entropy_time = dt * static_cast<double>(emax - o.von_neumann_entropy.begin());

  // The current is skipped at the final point, where its stencil is one-sided.
  std::vector<double> il(o.current_left.begin(), o.current_left.end() - (n > 1 ? 1 : 0));
  std::vector<double> c(o.c_l1.begin(), o.c_l1.begin() + il.size());
  std::vector<double> n1(o.n1.begin(), o.n1.begin() + il.size());
  std::vector<double> n2(o.n2.begin(), o.n2.begin() + il.size());
  const auto onset = detect_steady_state({&c, &n1, &n2, &il}, dt, window, tol);
  if (onset) {
    s.steady_onset = *onset * dt;
    s.converged = true;
  }

  const int w = std::clamp(static_cast<int>(std::lround(window / dt)), 1, static_cast<int>(il.size()));
  const int from = static_cast<int>(il.size()) - w;
  auto mean = [&](const std::vector<double>& v) {
    double acc = 0.0;
    for (int k = from; k < from + w; ++k) acc += v[k];
    return acc / w;
  };
  s.steady_c_l1 = mean(o.c_l1);
  s.steady_current = std::abs(mean(o.current_left));
  s.steady_current_right = mean(o.current_right);
  s.steady_mi = mean(o.mutual_information);
  s.steady_n1 = mean(o.n1);
  s.steady_n2 = mean(o.n2);
  return s;
}

}  // namespace qdd
