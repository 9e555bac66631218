#include "qdd/closed_system.hpp"

#include <cmath>

namespace qdd {

Mat2 ClosedParams::hamiltonian() const {
  Mat2 h;
  h << eps11, eps12, std::conj(eps12), eps22;
  return h;
}

double rabi_frequency(const ClosedParams& cp) {
  const double d = cp.eps11 - cp.eps22;
  return std::sqrt(d * d + 4.0 * std::norm(cp.eps12));
}

Mat2 closed_propagator(const ClosedParams& cp, double t) {
  // H = ē I + n·σ with |n| = Ω/2, so e^{−iHt} = e^{−iēt}(cos(Ωt/2) I − i sin(Ωt/2) n̂·σ).
  const double mean = 0.5 * (cp.eps11 + cp.eps22);
  const double half = 0.5 * rabi_frequency(cp);
  const cplx phase = std::exp(cplx(0.0, -mean * t));
  if (half == 0.0) return phase * Mat2::Identity();
  Mat2 nsig = cp.hamiltonian() - mean * Mat2::Identity();
  nsig /= half;
  return phase * (std::cos(half * t) * Mat2::Identity() - kI * std::sin(half * t) * nsig);
}

std::optional<double> revival_time(const ClosedParams& cp) {
  const double om = rabi_frequency(cp);
  if (!(om > 0.0)) return std::nullopt;
  return 2.0 * kPi / om;
}

ClosedSeries closed_coherence_series(const ClosedParams& cp, const TimeGrid& grid) {
  grid.validate();
  ClosedSeries s;
  s.grid = grid;
  const int n = grid.size();
  for (auto* v : {&s.c_l1, &s.bloch_x, &s.bloch_y, &s.bloch_z}) v->resize(n);
  for (int k = 0; k < n; ++k) {
    const Mat2 u = closed_propagator(cp, grid.time(k));
    // Occupation amplitudes of |10> and |01> starting from |01>.
    const cplx a10 = u(0, 1);
    const cplx a01 = u(1, 1);
    const cplx r23 = a10 * std::conj(a01);
    s.c_l1[k] = 2.0 * std::abs(r23);
    s.bloch_x[k] = 2.0 * r23.real();
    s.bloch_y[k] = 2.0 * r23.imag();
    s.bloch_z[k] = std::norm(a01) - std::norm(a10);
  }
  return s;
}

CuspReport detect_cusp(const ClosedParams& cp, double dt, double tol) {
  CuspReport rep;
  const auto period = revival_time(cp);
  if (!period) return rep;
  const auto s = closed_coherence_series(cp, TimeGrid::from_horizon(dt, *period));
  const auto& c = s.c_l1;
  const int n = static_cast<int>(c.size());

  std::vector<int> peaks;
  for (int k = 1; k + 1 < n; ++k)
    if (c[k] >= c[k - 1] && c[k] > c[k + 1] && c[k] >= 1.0 - tol) peaks.push_back(k);
  rep.touches = static_cast<int>(peaks.size());
  if (peaks.size() >= 2) {
    double lo = c[peaks[0]];
    for (int k = peaks[0]; k <= peaks[1]; ++k) lo = std::min(lo, c[k]);
    rep.dip = lo;
    rep.cusp = lo < std::min(c[peaks[0]], c[peaks[1]]);
  }
  return rep;
}

std::optional<double> cusp_threshold(double eps11, double eps22, const std::vector<double>& eps12_grid,
                                     double dt, double tol) {
  for (double e : eps12_grid)
    if (detect_cusp({eps11, eps22, e}, dt, tol).cusp) return e;
  return std::nullopt;
}

}  // namespace qdd
