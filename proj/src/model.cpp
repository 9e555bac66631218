#include "qdd/model.hpp"

#include <cmath>
#include <string>

namespace qdd {

Mat2 ModelParams::hamiltonian() const {
  Mat2 h;
  h << eps11, eps12, std::conj(eps12), eps22;
  return h;
}

namespace {

void check_reservoir(const ReservoirParams& r, const std::string& tag) {
  if (!(r.gamma >= 0.0) || !std::isfinite(r.gamma))
    throw ValidationError("gamma_" + tag + " must be >= 0");
  if (!(r.width > 0.0) || !std::isfinite(r.width))
    throw ValidationError("w_" + tag + " must be > 0");
  if (!std::isfinite(r.mu)) throw ValidationError("mu_" + tag + " must be finite");
  if (r.beta && !(*r.beta > 0.0)) throw ValidationError("beta_" + tag + " must be > 0");
}

}  // namespace

void ModelParams::validate() const {
  if (!std::isfinite(eps11)) throw ValidationError("eps11 must be finite");
  if (!std::isfinite(eps22)) throw ValidationError("eps22 must be finite");
  if (!std::isfinite(eps12.real()) || !std::isfinite(eps12.imag()))
    throw ValidationError("eps12 must be finite");
  check_reservoir(left, "L");
  check_reservoir(right, "R");

  const Mat2& n = initial_occupation;
  if ((n - n.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("initial_occupation must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat2> es(n);
  if (es.eigenvalues().minCoeff() < -1e-12 || es.eigenvalues().maxCoeff() > 1.0 + 1e-12)
    throw ValidationError("initial_occupation eigenvalues must lie in [0, 1]");
}

void SpectralConfig::validate() const {
  if (nodes < 2) throw ValidationError("quad_nodes must be >= 2");
  if (!(cutoff >= 5.0)) throw ValidationError("quad_cutoff must be >= 5");
}

double lorentzian(const ReservoirParams& r, double eps) {
  const double x = eps - r.mu;
  return r.gamma * r.width * r.width / (x * x + r.width * r.width);
}

Eigen::Matrix2d spectral_density(Reservoir alpha, double eps, const ModelParams& p) {
  Eigen::Matrix2d j = Eigen::Matrix2d::Zero();
  const int d = coupled_dot(alpha);
  j(d, d) = lorentzian(p.reservoir(alpha), eps);
  return j;
}

double fermi_occupation(double eps, const ReservoirParams& r) {
  const double x = eps - r.mu;
  if (!r.beta) {
    if (x < 0.0) return 1.0;
    if (x > 0.0) return 0.0;
    return 0.5;
  }
  const double z = *r.beta * x;
  // Evaluated on the side where the exponential cannot overflow.
  if (z > 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

double fermi_occupation(double eps, Reservoir alpha, const ModelParams& p) {
  return fermi_occupation(eps, p.reservoir(alpha));
}

Mat2 memory_kernel(Reservoir alpha, double dt, const ModelParams& p) {
  if (dt < 0.0) throw ValidationError("memory_kernel: negative time difference");
  const ReservoirParams& r = p.reservoir(alpha);
  Mat2 g = Mat2::Zero();
  const int d = coupled_dot(alpha);
  g(d, d) = 0.5 * r.gamma * r.width * std::exp(cplx(-r.width * dt, -r.mu * dt));
  return g;
}

}  // namespace qdd
