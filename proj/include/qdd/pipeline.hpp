#pragma once

#include "qdd/observables.hpp"

namespace qdd {

struct EvolveOptions {
  TimeGrid grid;
  SpectralConfig spectral;
  Backend backend = Backend::AuxOde;
  Execution execution = Execution::Parallel;
  double steady_window = 1.0;
  double steady_tol = 1e-4;
  bool check_physical = true;
};

struct EvolveResult {
  PropagatorGrid propagator;
  NoiseCorrelations noise;
  DensityMatrixSeries rho;
  ObservableSeries observables;
  ObservableSummary summary;
  double sum_rule = 0.0;
  PhysicalityReport physical;
};

/// Propagator, noise, density matrix and observables for one parameter point.
EvolveResult evolve(const ModelParams& p, const EvolveOptions& opt);

}  // namespace qdd
