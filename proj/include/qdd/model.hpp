#pragma once

#include <optional>

#include "qdd/types.hpp"

namespace qdd {

struct ReservoirParams {
  double gamma = 5.0;  // coupling strength Γ_α
  double width = 2.0;  // Lorentzian half-width W_α
  double mu = 0.0;     // chemical potential μ_α
  // Inverse temperature; empty means the zero-temperature limit.
  std::optional<double> beta;
};

/// Physical parameters of the serially coupled double dot, in units of Γ (ħ = 1).
struct ModelParams {
  double eps11 = 3.0;
  double eps22 = 2.0;
  cplx eps12 = 0.4;
  ReservoirParams left{5.0, 2.0, 5.0, std::nullopt};
  ReservoirParams right{5.0, 2.0, -5.0, std::nullopt};
  // n(j, k) = <a_j^† a_k> at t = 0; the default is |01> (second dot occupied).
  Mat2 initial_occupation = (Mat2() << 0, 0, 0, 1).finished();

  const ReservoirParams& reservoir(Reservoir r) const { return r == Reservoir::Left ? left : right; }
  ReservoirParams& reservoir(Reservoir r) { return r == Reservoir::Left ? left : right; }

  /// Single-particle system Hamiltonian [[ε11, ε12], [ε21, ε22]].
  Mat2 hamiltonian() const;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

struct SpectralConfig {
  // Gauss-Legendre nodes spent on the uniform part of each reservoir's core interval.
  int nodes = 640;
  // Core half-margin around the spectral features, in units of the reservoir width.
  double cutoff = 10.0;

  void validate() const;
};

/// J_α(ε) as a 2x2 real matrix; only the coupled diagonal entry is nonzero.
Eigen::Matrix2d spectral_density(Reservoir alpha, double eps, const ModelParams& p);

/// Scalar Lorentzian Γ_α W_α² / ((ε − μ_α)² + W_α²).
double lorentzian(const ReservoirParams& r, double eps);

/// Fermi-Dirac occupation; step function (1/2 at μ) in the zero-temperature limit.
double fermi_occupation(double eps, Reservoir alpha, const ModelParams& p);
double fermi_occupation(double eps, const ReservoirParams& r);

/// g_α(dt) = (Γ_α W_α / 2) e^{−iμ_α dt − W_α dt} on the coupled diagonal entry.
Mat2 memory_kernel(Reservoir alpha, double dt, const ModelParams& p);

}  // namespace qdd
