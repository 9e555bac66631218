#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qdd/parallel.hpp"
#include "qdd/propagator.hpp"
#include "qdd/spectral_quadrature.hpp"

namespace qdd {

/// Equal-time reservoir correlations v(t) = <F†F> and v̄(t) = <F F†> on the grid.
struct NoiseCorrelations {
  TimeGrid grid;
  std::vector<Mat2> v;
  std::vector<Mat2> vbar;
};

/// v and v̄ at one time from the auxiliary state Z(t). The two are summed
/// with separate weights f and 1 − f, never through the sum rule.
std::pair<Mat2, Mat2> noise_at(const SpectralQuadrature& sq, const AuxState& z, double t);

/// Whole-grid evaluation. Time points are distributed over workers while each
/// node sum runs in a fixed order, so both modes give bit-identical results.
NoiseCorrelations noise_correlations(const PropagatorGrid& pg, const SpectralQuadrature& sq,
                                     Execution mode = Execution::Parallel);
NoiseCorrelations noise_correlations(const PropagatorGrid& pg, const SpectralConfig& cfg,
                                     const ModelParams& p, Execution mode = Execution::Parallel);

std::vector<Mat2> lesser_correlation(const PropagatorGrid& pg, const SpectralConfig& cfg,
                                     const ModelParams& p);
std::vector<Mat2> greater_correlation(const PropagatorGrid& pg, const SpectralConfig& cfg,
                                      const ModelParams& p);

/// max_k ‖v + v̄ − (I − u u†)‖_max.
double sum_rule_residual(const PropagatorGrid& pg, const NoiseCorrelations& nc);

/// Most negative eigenvalue over v and v̄, and the largest over both.
std::pair<double, double> noise_eigen_range(const NoiseCorrelations& nc);

/// K(t_k, ε) = ∫₀^{t_k} u(s) e^{iεs} ds accumulated step by step with a
/// Filon rule on the cubic Hermite interpolant of u (using u' from the
/// auxiliary state). One ε at a time is handed to `sink` together with its
/// full time series, so the (t, ε) table is never materialized.
void for_each_spectral_kernel(const ModelParams& p, const PropagatorGrid& pg,
                              const std::vector<double>& eps,
                              const std::function<void(int, const std::vector<Mat2>&)>& sink);

/// Table form of the above, indexed [q][k]. Throws ValidationError if the
/// table would exceed `max_bytes`; use the streaming form in that case.
std::vector<std::vector<Mat2>> accumulate_spectral_kernels(const ModelParams& p, const PropagatorGrid& pg,
                                                           const std::vector<double>& eps,
                                                           std::size_t max_bytes = std::size_t(1) << 30);

/// CSV dump: t, then Re/Im of v11, v12, v21, v22, then the same for v̄.
void write_noise_csv(const NoiseCorrelations& nc, const std::string& path);

}  // namespace qdd
