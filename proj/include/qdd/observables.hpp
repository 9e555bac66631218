#pragma once

#include <optional>
#include <vector>

#include "qdd/density_matrix.hpp"

namespace qdd {

// All entropies use log base 2.
double l1_coherence(const Mat4& rho);
double relative_entropy_coherence(const Mat4& rho);
double purity(const Mat4& rho);
double von_neumann_entropy(const Eigen::MatrixXcd& rho);
double shannon_entropy_diagonal(const Mat4& rho);
double mutual_information(const Mat4& rho);
double correlated_coherence(const Mat4& rho);

struct BlochPoint {
  double x = 0.0, y = 0.0, z = 0.0;
  bool valid = false;  // false when the single-excitation block is empty
};

/// Bloch vector of the {|10>, |01>} block, |01> at the north pole.
BlochPoint bloch_coordinates(const Mat4& rho);

struct Currents {
  std::vector<double> left;
  std::vector<double> right;
  double max_imag_residue = 0.0;
  bool one_sided_ends = true;
};

/// I_α = d<N_α>/dt for the reservoir particle number, from the dot side:
/// I_L = −dN1/dt − i(ε12 ρ32 − ε21 ρ23), I_R = −dN2/dt − i(ε21 ρ23 − ε12 ρ32).
/// Second-order central differences inside, one-sided at the two ends.
Currents particle_currents(const DensityMatrixSeries& dm, const ModelParams& p);

/// -i(ε12 ρ32 − ε21 ρ23): the left current once d<N1>/dt has vanished.
double steady_current_from_coherence(const Mat4& rho, const ModelParams& p);

/// Index of the first grid point k such that every series varies by less than
/// `tol` over [t_k, t_k + window]; empty if none.
std::optional<int> detect_steady_state(const std::vector<const std::vector<double>*>& series, double dt,
                                       double window, double tol);

struct ObservableSeries {
  TimeGrid grid;
  std::vector<double> c_l1, c_rel_entropy, purity, von_neumann_entropy, shannon_entropy, mutual_information,
      correlated_coherence, bloch_x, bloch_y, bloch_z, current_left, current_right, n1, n2;
};

ObservableSeries compute_observables(const DensityMatrixSeries& dm, const ModelParams& p);

struct ObservableSummary {
  double peak_c_l1 = 0.0;
  double peak_time = 0.0;
  std::optional<double> steady_onset;
  bool converged = false;
  // Means over the final window; reported whether or not the run converged.
  double steady_c_l1 = 0.0;
  double steady_current = 0.0;  // |I_L|
  double steady_current_right = 0.0;
  double steady_mi = 0.0;
  double steady_n1 = 0.0;
  double steady_n2 = 0.0;
  double min_purity = 1.0;
  double min_purity_time = 0.0;
  double max_entropy = 0.0;
  double max_entropy_time = 0.0;
};

ObservableSummary summarize(const ObservableSeries& obs, double window = 1.0, double tol = 1e-4);

}  // namespace qdd
