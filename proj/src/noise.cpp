#include "qdd/noise.hpp"

#include <algorithm>
#include <cmath>

#include "qdd/io.hpp"

namespace qdd {

namespace {

using Col6 = Eigen::Matrix<cplx, 6, 1>;

// Beyond this decay the rotated term is below double precision of anything
// it could be added to.
constexpr double kRayCut = 60.0;

inline void add_outer(Mat2& acc, cplx w, const Vec2& a, const Vec2& b) {
  acc(0, 0) += w * a(0) * std::conj(b(0));
  acc(0, 1) += w * a(0) * std::conj(b(1));
  acc(1, 0) += w * a(1) * std::conj(b(0));
  acc(1, 1) += w * a(1) * std::conj(b(1));
}

}  // namespace

std::pair<Mat2, Mat2> noise_at(const SpectralQuadrature& sq, const AuxState& z, double t) {
  Mat2 v = Mat2::Zero();
  Mat2 vb = Mat2::Zero();
  // κ vanishes identically at t = 0; the tail and ray sums would only cancel to rounding.
  if (t == 0.0) return {v, vb};
  for (const ReservoirQuadrature& q : sq.res) {
    const int d = coupled_dot(q.reservoir);
    const Col6 zc = z.col(d);

    for (const RealNode& n : q.core) {
      const Vec2 kap = n.r * zc - std::exp(cplx(0.0, -n.eps * t)) * n.r.col(d);
      add_outer(v, n.less, kap, kap);
      add_outer(vb, n.great, kap, kap);
    }
    for (const RealNode& n : q.tail) {
      const Vec2 ks = n.r * zc;
      const Vec2 k0 = n.r.col(d);
      add_outer(v, n.less, ks, ks);
      add_outer(v, n.less, k0, k0);
      add_outer(vb, n.great, ks, ks);
      add_outer(vb, n.great, k0, k0);
    }
    Mat2 ip = Mat2::Zero();
    Mat2 ipb = Mat2::Zero();
    for (const RayNode& n : q.ray) {
      if (n.eps.imag() * t > kRayCut) continue;
      const cplx ph = std::exp(kI * n.eps * t);
      const Vec2 ks = n.r * zc;
      const Eigen::RowVector2cd rct = n.rc.transpose();
      ip.noalias() += (n.less * ph) * ks * rct;
      ipb.noalias() += (n.great * ph) * ks * rct;
    }
    v -= ip + ip.adjoint();
    vb -= ipb + ipb.adjoint();
  }
  return {v, vb};
}

NoiseCorrelations noise_correlations(const PropagatorGrid& pg, const SpectralQuadrature& sq,
                                     Execution mode) {
  const int n = pg.size();
  NoiseCorrelations nc{pg.grid, std::vector<Mat2>(n), std::vector<Mat2>(n)};
  if (mode == Execution::Serial) {
    for (int k = 0; k < n; ++k) std::tie(nc.v[k], nc.vbar[k]) = noise_at(sq, pg.states[k], pg.grid.time(k));
  } else {
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int k = 0; k < n; ++k) std::tie(nc.v[k], nc.vbar[k]) = noise_at(sq, pg.states[k], pg.grid.time(k));
  }
  return nc;
}

NoiseCorrelations noise_correlations(const PropagatorGrid& pg, const SpectralConfig& cfg,
                                     const ModelParams& p, Execution mode) {
  return noise_correlations(pg, build_spectral_quadrature(p, cfg, pg.grid.horizon()), mode);
}

namespace {

// Keeps only one occupation weight so the two series come from separate sums.
SpectralQuadrature select_weights(SpectralQuadrature sq, bool lesser) {
  for (auto& q : sq.res) {
    for (auto* nodes : {&q.core, &q.tail})
      for (RealNode& n : *nodes) (lesser ? n.great : n.less) = 0.0;
    for (RayNode& n : q.ray) (lesser ? n.great : n.less) = 0.0;
  }
  return sq;
}

}  // namespace

std::vector<Mat2> lesser_correlation(const PropagatorGrid& pg, const SpectralConfig& cfg,
                                     const ModelParams& p) {
  const auto sq = select_weights(build_spectral_quadrature(p, cfg, pg.grid.horizon()), true);
  return noise_correlations(pg, sq).v;
}

std::vector<Mat2> greater_correlation(const PropagatorGrid& pg, const SpectralConfig& cfg,
                                      const ModelParams& p) {
  const auto sq = select_weights(build_spectral_quadrature(p, cfg, pg.grid.horizon()), false);
  return noise_correlations(pg, sq).vbar;
}

double sum_rule_residual(const PropagatorGrid& pg, const NoiseCorrelations& nc) {
  double worst = 0.0;
  for (int k = 0; k < pg.size(); ++k) {
    const Mat2 u = pg.u(k);
    const Mat2 r = nc.v[k] + nc.vbar[k] - (Mat2::Identity() - u * u.adjoint());
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

std::pair<double, double> noise_eigen_range(const NoiseCorrelations& nc) {
  double lo = 0.0, hi = 0.0;
  for (const auto* series : {&nc.v, &nc.vbar}) {
    for (const Mat2& m : *series) {
      const Mat2 h = 0.5 * (m + m.adjoint());
      Eigen::SelfAdjointEigenSolver<Mat2> es(h, Eigen::EigenvaluesOnly);
      lo = std::min(lo, es.eigenvalues().minCoeff());
      hi = std::max(hi, es.eigenvalues().maxCoeff());
    }
  }
  return {lo, hi};
}

namespace {

// Moments m_j = ∫₀¹ x^j e^{iθx} dx for j = 0..3.
std::array<cplx, 4> filon_moments(double theta) {
  std::array<cplx, 4> m{};
  if (std::abs(theta) < 1.0) {
    // Power series; 25 terms are far below double precision for |θ| < 1.
    cplx term = 1.0;
    for (int n = 0; n < 25; ++n) {
      if (n > 0) term *= kI * theta / static_cast<double>(n);
      for (int j = 0; j < 4; ++j) m[j] += term / static_cast<double>(n + j + 1);
    }
    return m;
  }
  const cplx e = std::exp(kI * theta);
  const cplx it = kI * theta;
  m[0] = (e - 1.0) / it;
  for (int j = 1; j < 4; ++j) m[j] = (e - static_cast<double>(j) * m[j - 1]) / it;
  return m;
}

}  // namespace

void for_each_spectral_kernel(const ModelParams& p, const PropagatorGrid& pg,
                              const std::vector<double>& eps,
                              const std::function<void(int, const std::vector<Mat2>&)>& sink) {
  const int n = pg.size();
  const double h = pg.grid.dt;
  const Mat2 hs = p.hamiltonian();
  std::vector<Mat2> du(n);
  for (int k = 0; k < n; ++k)
    du[k] = -kI * hs * pg.u(k) - pg.memory(Reservoir::Left, k) - pg.memory(Reservoir::Right, k);

  std::vector<Mat2> kt(n);
  for (int q = 0; q < static_cast<int>(eps.size()); ++q) {
    const double e = eps[q];
    const auto mom = filon_moments(e * h);
    // Weights of the cubic Hermite basis against e^{iθx} on [0, 1].
    const cplx w00 = mom[0] - 3.0 * mom[2] + 2.0 * mom[3];
    const cplx w10 = mom[1] - 2.0 * mom[2] + mom[3];
    const cplx w01 = 3.0 * mom[2] - 2.0 * mom[3];
    const cplx w11 = mom[3] - mom[2];
    kt[0] = Mat2::Zero();
    for (int k = 0; k + 1 < n; ++k) {
      const cplx ph = std::exp(kI * (e * pg.grid.time(k)));
      kt[k + 1] = kt[k] + (h * ph) * (w00 * pg.u(k) + (h * w10) * du[k] + w01 * pg.u(k + 1) +
                                      (h * w11) * du[k + 1]);
    }
    sink(q, kt);
  }
}

std::vector<std::vector<Mat2>> accumulate_spectral_kernels(const ModelParams& p, const PropagatorGrid& pg,
                                                           const std::vector<double>& eps,
                                                           std::size_t max_bytes) {
  const std::size_t bytes = eps.size() * static_cast<std::size_t>(pg.size()) * sizeof(Mat2);
  if (bytes > max_bytes)
    throw ValidationError("spectral kernel table too large; use for_each_spectral_kernel");
  std::vector<std::vector<Mat2>> table(eps.size());
  for_each_spectral_kernel(p, pg, eps, [&](int q, const std::vector<Mat2>& k) { table[q] = k; });
  return table;
}

void write_noise_csv(const NoiseCorrelations& nc, const std::string& path) {
  std::vector<std::string> cols{"t"};
  for (const char* m : {"v", "vbar"})
    for (const char* ij : {"11", "12", "21", "22"}) {
      cols.push_back(std::string("re_") + m + ij);
      cols.push_back(std::string("im_") + m + ij);
    }
  CsvTable tab(cols);
  for (int k = 0; k < static_cast<int>(nc.v.size()); ++k) {
    std::vector<double> row{nc.grid.time(k)};
    for (const auto* s : {&nc.v, &nc.vbar})
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          row.push_back((*s)[k](i, j).real());
          row.push_back((*s)[k](i, j).imag());
        }
    tab.rows.push_back(std::move(row));
  }
  write_csv(tab, path);
}

}  // namespace qdd
