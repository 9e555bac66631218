#include "qdd/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdd {

Mat6 generator_matrix(const ModelParams& p) {
  Mat6 m = Mat6::Zero();
  const Mat2 id = Mat2::Identity();
  m.block<2, 2>(0, 0) = -kI * p.hamiltonian();
  for (Reservoir r : kReservoirs) {
    const int off = 2 + 2 * static_cast<int>(r);
    const ReservoirParams& res = p.reservoir(r);
    const int d = coupled_dot(r);
    m.block<2, 2>(0, off) = -id;
    m(off + d, d) = 0.5 * res.gamma * res.width;
    m.block<2, 2>(off, off) = -cplx(res.width, res.mu) * id;
  }
  return m;
}

namespace {

double sigma_max(const Mat2& u) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(u.adjoint() * u, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

[[noreturn]] void report_instability(const TimeGrid& grid, int k, double s, double suggested) {
  std::ostringstream os;
  os << "propagator unstable at t=" << grid.time(k) << " (singular value " << s
     << " > 1+1e-6); retry with dt <= " << suggested;
  throw NumericalError(os.str());
}

constexpr double kInstabilityTol = 1e-6;

PropagatorGrid solve_aux_ode(const ModelParams& p, const TimeGrid& grid) {
  const Mat6 m = generator_matrix(p);
  const Mat6 hm = grid.dt * m;
  // Classical RK4 applied to a linear autonomous system is the degree-4
  // Taylor polynomial of exp(hM).
  Mat6 step = Mat6::Identity();
  Mat6 term = Mat6::Identity();
  for (int j = 1; j <= 4; ++j) {
    term = (term * hm) / static_cast<double>(j);
    step += term;
  }

  const double radius = m.eigenvalues().cwiseAbs().maxCoeff();
  const double suggested = std::min(0.5 * grid.dt, 2.0 / std::max(radius, 1e-12));

  PropagatorGrid pg{grid, {}};
  pg.states.resize(grid.size());
  AuxState z = AuxState::Zero();
  z.topRows<2>() = Mat2::Identity();
  pg.states[0] = z;
  for (int k = 1; k < grid.size(); ++k) {
    z = step * z;
    pg.states[k] = z;
    const double s = sigma_max(z.topRows<2>());
    if (!(s <= 1.0 + kInstabilityTol)) report_instability(grid, k, s, suggested);
  }
  return pg;
}

// Trapezoidal product integration of the memory term, implicit in the newest
// sample. The kernel is only sampled, so this path does not rely on its
// exponential form.
PropagatorGrid solve_trapezoid(const ModelParams& p, const TimeGrid& grid) {
  const int n = grid.size();
  const double h = grid.dt;
  const Mat2 hs = p.hamiltonian();

  // Scalar kernel on the coupled entry, sampled at lags k·h.
  std::vector<cplx> kern[2];
  for (Reservoir r : kReservoirs) {
    auto& kr = kern[static_cast<int>(r)];
    kr.resize(n);
    const int d = coupled_dot(r);
    for (int k = 0; k < n; ++k) kr[k] = memory_kernel(r, k * h, p)(d, d);
  }

  PropagatorGrid pg{grid, {}};
  pg.states.assign(n, AuxState::Zero());
  std::vector<Mat2> u(n);
  u[0] = Mat2::Identity();
  pg.states[0].topRows<2>() = u[0];

  // Row-restricted convolution: only row d of y_α is nonzero.
  auto history = [&](int r, int upto_excl, int at) {
    const int d = r;
    Eigen::RowVector2cd acc = 0.5 * kern[r][at] * u[0].row(d);
    for (int j = 1; j < upto_excl; ++j) acc += kern[r][at - j] * u[j].row(d);
    return Eigen::RowVector2cd(h * acc);
  };

  Mat2 g0 = Mat2::Zero();
  for (Reservoir r : kReservoirs) g0 += memory_kernel(r, 0.0, p);
  const Mat2 lhs = Mat2::Identity() + 0.5 * h * (kI * hs + 0.5 * h * g0);
  const Eigen::PartialPivLU<Mat2> lu(lhs);

  Mat2 f_prev = -kI * hs * u[0];  // memory term vanishes at t = 0
  for (int k = 1; k < n; ++k) {
    Mat2 partial = Mat2::Zero();
    Eigen::RowVector2cd part_rows[2];
    for (int r = 0; r < 2; ++r) {
      part_rows[r] = history(r, k, k);
      partial.row(r) = part_rows[r];
    }
    const Mat2 rhs = u[k - 1] + 0.5 * h * f_prev - 0.5 * h * partial;
    u[k] = lu.solve(rhs);

    AuxState& z = pg.states[k];
    z.topRows<2>() = u[k];
    Mat2 ysum = Mat2::Zero();
    for (int r = 0; r < 2; ++r) {
      const Eigen::RowVector2cd yrow = part_rows[r] + 0.5 * h * kern[r][0] * u[k].row(r);
      z.row(2 + 2 * r + r) = yrow;
      ysum.row(r) += yrow;
    }
    f_prev = -kI * hs * u[k] - ysum;

    const double s = sigma_max(u[k]);
    if (!(s <= 1.0 + kInstabilityTol)) report_instability(grid, k, s, 0.5 * h);
  }
  return pg;
}

// The trapezoid error expands in even powers of h, so one Richardson step on
// a half-step solve lifts the result to fourth order.
PropagatorGrid solve_volterra(const ModelParams& p, const TimeGrid& grid) {
  PropagatorGrid coarse = solve_trapezoid(p, grid);
  const PropagatorGrid fine = solve_trapezoid(p, TimeGrid{0.5 * grid.dt, 2 * grid.n_steps});
  for (int k = 0; k < coarse.size(); ++k)
    coarse.states[k] = (4.0 * fine.states[2 * k] - coarse.states[k]) / 3.0;
  return coarse;
}

}  // namespace

PropagatorGrid solve_retarded(const ModelParams& p, const TimeGrid& grid, Backend backend) {
  p.validate();
  grid.validate();
  return backend == Backend::AuxOde ? solve_aux_ode(p, grid) : solve_volterra(p, grid);
}

double max_singular_value(const PropagatorGrid& pg) {
  double s = 0.0;
  for (int k = 0; k < pg.size(); ++k) s = std::max(s, sigma_max(pg.u(k)));
  return s;
}

double propagator_residual(const ModelParams& p, const PropagatorGrid& pg) {
  const int n = pg.size();
  const double h = pg.grid.dt;
  if (n < 11) return 0.0;
  const Mat2 hs = p.hamiltonian();

  std::vector<cplx> kern[2];
  for (Reservoir r : kReservoirs) {
    const int d = coupled_dot(r);
    auto& kr = kern[static_cast<int>(r)];
    kr.resize(n);
    for (int k = 0; k < n; ++k) kr[k] = memory_kernel(r, k * h, p)(d, d);
  }

  // Alternative extended Simpson weights (fourth order), needs >= 8 samples.
  auto weight = [](int j, int last) {
    static constexpr double edge[4] = {17.0 / 48, 59.0 / 48, 43.0 / 48, 49.0 / 48};
    if (j < 4) return edge[j];
    if (last - j < 4) return edge[last - j];
    return 1.0;
  };

  double worst = 0.0;
  for (int k = 7; k <= n - 3; ++k) {
    const Mat2 du = (-pg.u(k + 2) + 8.0 * pg.u(k + 1) - 8.0 * pg.u(k - 1) + pg.u(k - 2)) / (12.0 * h);
    Mat2 conv = Mat2::Zero();
    for (int r = 0; r < 2; ++r) {
      Eigen::RowVector2cd acc = Eigen::RowVector2cd::Zero();
      for (int j = 0; j <= k; ++j) acc += weight(j, k) * kern[r][k - j] * pg.states[j].row(r);
      conv.row(r) = h * acc;
    }
    const Mat2 res = du + kI * hs * pg.u(k) + conv;
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace qdd
