#pragma once

#include <vector>

#include "qdd/model.hpp"
#include "qdd/time_grid.hpp"

namespace qdd {

enum class BathStrategy { Uniform };

/// Finite stand-in for one reservoir: modes ε_k with couplings V_k to the
/// coupled dot, V_k² = J_α(ε_k) Δε / 2π on a midpoint grid.
struct DiscretizedBath {
  Reservoir reservoir = Reservoir::Left;
  std::vector<double> energies;
  std::vector<double> couplings;
  double cutoff = 10.0;
  double spacing = 0.0;

  int size() const { return static_cast<int>(energies.size()); }
};

DiscretizedBath discretize_bath(Reservoir alpha, int n_modes, const ModelParams& p, double cutoff = 10.0,
                                BathStrategy strategy = BathStrategy::Uniform);

/// Σ_k V_k² e^{−iε_k dt}, the kernel the finite bath actually realizes.
cplx discrete_kernel(const DiscretizedBath& bath, double dt);

/// Exact single-particle dynamics of dots plus discretized baths.
struct ExactEvolution {
  Eigen::MatrixXcd hamiltonian;  // (2 + N_L + N_R) square, dots first
  Eigen::VectorXd energies;      // eigenvalues
  Eigen::MatrixXcd modes;        // eigenvectors
  Eigen::VectorXd bath_occupation;
  Mat2 dot_occupation;
  double safe_horizon = 0.0;

  int dim() const { return static_cast<int>(hamiltonian.rows()); }
  Eigen::MatrixXcd propagator(double t) const;
  // Γ_ij = <c_j† c_i> at t = 0 over all single-particle modes.
  Eigen::MatrixXcd initial_covariance() const;
};

ExactEvolution make_exact(const DiscretizedBath& left, const DiscretizedBath& right, const ModelParams& p);

struct ExactSnapshot {
  double t = 0.0;
  Mat2 u, v, vbar;
  double quartic = 0.0;  // <F1† F1 F2† F2> from the bath-mode expansion
  Mat2 correlation;      // C_ij = <a_j† a_i>
  Mat4 rho;              // reduced dot state from the natural-orbital form
};

ExactSnapshot exact_at(const ExactEvolution& ev, double t);

/// Snapshots on `grid`; refuses horizons past the recurrence-safe bound
/// N π / (2 c W) with a ValidationError quoting that bound.
std::vector<ExactSnapshot> exact_greens(const DiscretizedBath& left, const DiscretizedBath& right,
                                        const ModelParams& p, const TimeGrid& grid);

/// Reduced 2-mode state of a number-conserving Gaussian state with
/// correlation C_ij = <a_j† a_i>, built from its natural orbitals.
Mat4 gaussian_dot_state(const Mat2& c);

/// Brute-force many-body check on a small bath: evolves the full Fock-space
/// state (Jordan-Wigner) and returns the largest deviation between its exact
/// expectations and the Gaussian/Wick expressions used by the solver: the
/// reduced 4x4 dot state and <F1†F1F2†F2>. Zero temperature only.
struct FockCheck {
  double rho_error = 0.0;
  double quartic_error = 0.0;
};

FockCheck fock_space_check(const DiscretizedBath& left, const DiscretizedBath& right, const ModelParams& p,
                           double t);

}  // namespace qdd
