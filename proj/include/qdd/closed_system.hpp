#pragma once

#include <optional>
#include <vector>

#include "qdd/model.hpp"
#include "qdd/time_grid.hpp"

namespace qdd {

struct ClosedParams {
  double eps11 = 3.0;
  double eps22 = 2.0;
  cplx eps12 = 0.4;

  static ClosedParams from(const ModelParams& p) { return {p.eps11, p.eps22, p.eps12}; }
  Mat2 hamiltonian() const;
};

/// e^{−iHt} from the analytic eigendecomposition of the 2x2 Hermitian H.
Mat2 closed_propagator(const ClosedParams& cp, double t);

/// Ω = sqrt((ε11 − ε22)² + 4|ε12|²).
double rabi_frequency(const ClosedParams& cp);

/// 2π/Ω; empty when Ω = 0 (no revival).
std::optional<double> revival_time(const ClosedParams& cp);

/// Initial state |01>: C_l1 = 2|u12 u22*| and the block Bloch vector.
struct ClosedSeries {
  TimeGrid grid;
  std::vector<double> c_l1, bloch_x, bloch_y, bloch_z;
};

ClosedSeries closed_coherence_series(const ClosedParams& cp, const TimeGrid& grid);

struct CuspReport {
  int touches = 0;  // local maxima within tol of 1 during the first period
  bool cusp = false;
  double dip = 0.0;  // deepest interior minimum between the first two touches
};

/// Looks for two local maxima of C_l1 reaching 1 − tol, separated by a local
/// minimum, within one revival period.
CuspReport detect_cusp(const ClosedParams& cp, double dt, double tol = 1e-3);

/// Smallest ε12 in `grid` (ascending) showing a cusp; empty if none.
std::optional<double> cusp_threshold(double eps11, double eps22, const std::vector<double>& eps12_grid,
                                     double dt = 1e-3, double tol = 1e-3);

}  // namespace qdd
