#pragma once

#include <cmath>

#include "qdd/types.hpp"

namespace qdd {

/// Uniform grid t_k = k·dt, k = 0..n_steps, starting at t0 = 0.
struct TimeGrid {
  double dt = 1e-3;
  int n_steps = 12000;

  int size() const { return n_steps + 1; }
  double time(int k) const { return k * dt; }
  double horizon() const { return n_steps * dt; }

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be > 0");
    if (n_steps < 1) throw ValidationError("n_steps must be >= 1");
  }

  static TimeGrid from_horizon(double dt, double horizon) {
    return TimeGrid{dt, static_cast<int>(std::lround(horizon / dt))};
  }
};

}  // namespace qdd
