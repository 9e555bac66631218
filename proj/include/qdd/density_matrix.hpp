#pragma once

#include <vector>

#include "qdd/noise.hpp"

namespace qdd {

// Basis order (|11>, |10>, |01>, |00>) with |n1 n2>.
struct DensityMatrixSeries {
  TimeGrid grid;
  std::vector<Mat4> rho;
};

/// C_ij = <a_j† a_i> = (u n0ᵀ u†)_ij + v_ij.
Mat2 dot_correlation(const Mat2& u, const Mat2& v, const Mat2& n0);

/// D_ij = <a_i a_j†> = (u (I − n0ᵀ) u†)_ij + v̄_ij, computed without the sum rule.
Mat2 dot_anticorrelation(const Mat2& u, const Mat2& vbar, const Mat2& n0);

/// <F1† F1 F2† F2> by Wick factorization: v11 v22 + v21 v̄12.
double quartic_noise_average(const Mat2& v, const Mat2& vbar);

/// ρ at one time. ρ11 = <N1 N2> = C11 C22 + C21 D12; the remaining diagonal
/// entries follow from <N1>, <N2>, and ρ23 = C12. Requires a number-diagonal n0.
Mat4 assemble_rho_at(const Mat2& u, const Mat2& v, const Mat2& vbar, const Mat2& n0);

/// Throws NumericalError on a physicality violation (eigenvalue < −1e−6 or
/// |trace − 1| > 1e−8) unless `check` is false.
DensityMatrixSeries assemble_rho(const PropagatorGrid& pg, const NoiseCorrelations& nc,
                                 const ModelParams& p, bool check = true);

/// Partial trace onto dot 1 or 2, as diag(P(occupied), P(empty)).
Eigen::Matrix2d reduce_dot(const Mat4& rho, int which);

struct PhysicalityReport {
  double trace_error = 0.0;      // max |tr ρ − 1|
  double min_eigenvalue = 1.0;   // min over grid
  double hermiticity = 0.0;      // max |ρ − ρ†|
  double forbidden = 0.0;        // max |ρ_ij| outside the diagonal and (2,3)/(3,2)
};

PhysicalityReport physicality(const DensityMatrixSeries& dm);

}  // namespace qdd
