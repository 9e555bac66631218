#include "qdd/pipeline.hpp"

namespace qdd {

EvolveResult evolve(const ModelParams& p, const EvolveOptions& opt) {
  p.validate();
  opt.grid.validate();
  opt.spectral.validate();
  EvolveResult r;
  r.propagator = solve_retarded(p, opt.grid, opt.backend);
  r.noise = noise_correlations(r.propagator, opt.spectral, p, opt.execution);
  r.sum_rule = sum_rule_residual(r.propagator, r.noise);
  r.rho = assemble_rho(r.propagator, r.noise, p, opt.check_physical);
  r.physical = physicality(r.rho);
  r.observables = compute_observables(r.rho, p);
  r.summary = summarize(r.observables, opt.steady_window, opt.steady_tol);
  return r;
}

}  // namespace qdd
