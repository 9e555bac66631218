#pragma once

#include <vector>

#include "qdd/model.hpp"
#include "qdd/time_grid.hpp"

namespace qdd {

enum class Backend { AuxOde, Volterra };

/// Retarded Green's function u(t_k) together with the memory integrals
/// y_α(t_k) = ∫₀ᵗ g_α(t − τ) u(τ) dτ, stacked as (u; y_L; y_R).
struct PropagatorGrid {
  TimeGrid grid;
  std::vector<AuxState> states;

  Mat2 u(int k) const { return states[k].topRows<2>(); }
  Mat2 memory(Reservoir r, int k) const {
    return states[k].middleRows<2>(2 + 2 * static_cast<int>(r));
  }
  int size() const { return static_cast<int>(states.size()); }
};

/// Generator M of the auxiliary linear system Z' = M Z with Z = (u; y_L; y_R).
Mat6 generator_matrix(const ModelParams& p);

/// Solves du/dt + iε u + Σ_α ∫₀ᵗ g_α(t−τ) u(τ) dτ = 0 with u(0) = I.
/// Throws NumericalError when the step size is unstable.
PropagatorGrid solve_retarded(const ModelParams& p, const TimeGrid& grid,
                              Backend backend = Backend::AuxOde);

/// Largest singular value of u over the grid.
double max_singular_value(const PropagatorGrid& pg);

/// Max-entry residual of the integro-differential equation, using fourth-order
/// central differences for du/dt and fourth-order Gregory quadrature for the
/// memory convolution. Evaluated at interior points with at least eight
/// history samples; returns 0 when the grid is too short.
double propagator_residual(const ModelParams& p, const PropagatorGrid& pg);

}  // namespace qdd
