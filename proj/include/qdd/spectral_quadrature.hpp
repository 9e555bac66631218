#pragma once

#include <vector>

#include "qdd/model.hpp"

namespace qdd {

using RowBlock = Eigen::Matrix<cplx, 2, 6>;

// Real-axis node carrying the resolvent R(ε) = P (M + iε)^{-1}, P = [I 0 0].
struct RealNode {
  double eps;
  double less;   // dε · J_α(ε)/2π · f_α(ε)
  double great;  // dε · J_α(ε)/2π · (1 − f_α(ε))
  RowBlock r;
};

// Node on the ray ε = A + iy used for the oscillatory tail term. The weights
// include the rotation factor ±i, dy, and the analytically continued J/2π and
// occupation; `rc` holds the continuation of conj(R(ε)) applied to the
// coupled initial column.
struct RayNode {
  cplx eps;
  cplx less;
  cplx great;
  RowBlock r;
  Vec2 rc;
};

struct ReservoirQuadrature {
  Reservoir reservoir = Reservoir::Left;
  std::vector<RealNode> core;  // κκ† integrated directly
  std::vector<RealNode> tail;  // smooth parts κ_sκ_s† + κ_0κ_0† beyond the core
  std::vector<RayNode> ray;    // cross term e^{iεt} κ_s κ_0† rotated off the axis
  double lo = 0.0;
  double hi = 0.0;
};

/// Energy quadrature for the noise integrals, valid for 0 <= t <= horizon.
struct SpectralQuadrature {
  ReservoirQuadrature res[2];
  double horizon = 0.0;

  int node_count() const;
};

SpectralQuadrature build_spectral_quadrature(const ModelParams& p, const SpectralConfig& cfg,
                                             double horizon);

/// Gauss-Legendre rule with 16 nodes mapped to [a, b], appended to the output.
void gauss_panel(double a, double b, std::vector<double>& x, std::vector<double>& w);

}  // namespace qdd
