#include "qdd/density_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdd {

Mat2 dot_correlation(const Mat2& u, const Mat2& v, const Mat2& n0) {
  return u * n0.transpose() * u.adjoint() + v;
}

Mat2 dot_anticorrelation(const Mat2& u, const Mat2& vbar, const Mat2& n0) {
  return u * (Mat2::Identity() - n0.transpose()) * u.adjoint() + vbar;
}

double quartic_noise_average(const Mat2& v, const Mat2& vbar) {
  return (v(0, 0) * v(1, 1) + v(1, 0) * vbar(0, 1)).real();
}

Mat4 assemble_rho_at(const Mat2& u, const Mat2& v, const Mat2& vbar, const Mat2& n0) {
  const Mat2 c = dot_correlation(u, v, n0);
  const Mat2 d = dot_anticorrelation(u, vbar, n0);
  const double n1 = c(0, 0).real();
  const double n2 = c(1, 1).real();
  const double both = (c(0, 0) * c(1, 1) + c(1, 0) * d(0, 1)).real();

  Mat4 rho = Mat4::Zero();
  rho(0, 0) = both;
  rho(1, 1) = n1 - both;
  rho(2, 2) = n2 - both;
  rho(3, 3) = 1.0 - n1 - n2 + both;
  rho(1, 2) = c(0, 1);
  rho(2, 1) = std::conj(c(0, 1));
  return rho;
}

DensityMatrixSeries assemble_rho(const PropagatorGrid& pg, const NoiseCorrelations& nc,
                                 const ModelParams& p, bool check) {
  const Mat2& n0 = p.initial_occupation;
  if (std::abs(n0(0, 1)) > 1e-14)
    throw ValidationError("initial_occupation must be number-diagonal");
  const int n = pg.size();
  DensityMatrixSeries dm{pg.grid, std::vector<Mat4>(n)};
  for (int k = 0; k < n; ++k) dm.rho[k] = assemble_rho_at(pg.u(k), nc.v[k], nc.vbar[k], n0);

  if (check) {
    const PhysicalityReport r = physicality(dm);
    if (r.min_eigenvalue < -1e-6 || r.trace_error > 1e-8) {
      std::ostringstream os;
      os << "density matrix unphysical (min eigenvalue " << r.min_eigenvalue << ", trace error "
         << r.trace_error << "); increase quad_nodes or quad_cutoff";
      throw NumericalError(os.str());
    }
  }
  return dm;
}

Eigen::Matrix2d reduce_dot(const Mat4& rho, int which) {
  const double r11 = rho(0, 0).real(), r22 = rho(1, 1).real();
  const double r33 = rho(2, 2).real(), r44 = rho(3, 3).real();
  Eigen::Matrix2d out = Eigen::Matrix2d::Zero();
  if (which == 1) {
    out(0, 0) = r11 + r22;
    out(1, 1) = r33 + r44;
  } else if (which == 2) {
    out(0, 0) = r11 + r33;
    out(1, 1) = r22 + r44;
  } else {
    throw ValidationError("reduce_dot: which must be 1 or 2");
  }
  return out;
}

PhysicalityReport physicality(const DensityMatrixSeries& dm) {
  PhysicalityReport r;
  for (const Mat4& rho : dm.rho) {
    r.trace_error = std::max(r.trace_error, std::abs(rho.trace() - 1.0));
    r.hermiticity = std::max(r.hermiticity, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    r.min_eigenvalue = std::min(r.min_eigenvalue, es.eigenvalues().minCoeff());
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (i == j || (i == 1 && j == 2) || (i == 2 && j == 1)) continue;
        r.forbidden = std::max(r.forbidden, std::abs(rho(i, j)));
      }
  }
  return r;
}

}  // namespace qdd
