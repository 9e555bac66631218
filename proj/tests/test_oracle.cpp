#include <cmath>

#include "doctest.h"
#include "qdd/closed_system.hpp"
#include "qdd/density_matrix.hpp"
#include "qdd/oracle.hpp"
#include "qdd/propagator.hpp"

using namespace qdd;

TEST_CASE("two-mode flat band gets equal couplings") {
  ModelParams p;
  p.left.width = 1e6;  // J is flat over the band
  const auto b = discretize_bath(Reservoir::Left, 2, p, 1e-6);
  REQUIRE(b.size() == 2);
  CHECK(b.couplings[0] == doctest::Approx(b.couplings[1]).epsilon(1e-9));
  CHECK(b.energies[0] < p.left.mu);
  CHECK(b.energies[1] > p.left.mu);
  CHECK_THROWS_AS(discretize_bath(Reservoir::Left, 1, p), ValidationError);
  CHECK_THROWS_AS(discretize_bath(Reservoir::Left, 10, p, 0.0), ValidationError);
}

TEST_CASE("total coupling weight") {
  ModelParams p;
  for (double c : {1.0, 5.0, 10.0}) {
    const auto b = discretize_bath(Reservoir::Right, 400, p, c);
    const double w = discrete_kernel(b, 0.0).real();
    const double expect = 0.5 * p.right.gamma * p.right.width * (2.0 / kPi) * std::atan(c);
    CHECK(w == doctest::Approx(expect).epsilon(2e-2));
  }
}

TEST_CASE("discrete kernel reconstructs the memory kernel") {
  ModelParams p;
  const auto b = discretize_bath(Reservoir::Left, 4000, p, 100.0);
  for (double x : {0.0, 0.5, 1.0, 2.5, 5.0}) {
    const double dt = x / p.left.width;
    const cplx g = memory_kernel(Reservoir::Left, dt, p)(0, 0);
    CHECK(std::abs(discrete_kernel(b, dt) - g) / std::abs(g) < 1e-2);
  }
}

TEST_CASE("no bath modes gives the isolated propagator") {
  ModelParams p;
  p.eps12 = cplx(0.4, 0.1);
  const auto ev = make_exact(DiscretizedBath{Reservoir::Left}, DiscretizedBath{Reservoir::Right}, p);
  CHECK(ev.dim() == 2);
  for (double t : {0.5, 3.0, 9.0})
    CHECK((exact_at(ev, t).u - closed_propagator(ClosedParams::from(p), t)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("bath refinement converges") {
  ModelParams p;
  const auto e2 = make_exact(discretize_bath(Reservoir::Left, 200, p), discretize_bath(Reservoir::Right, 200, p), p);
  const auto e4 = make_exact(discretize_bath(Reservoir::Left, 400, p), discretize_bath(Reservoir::Right, 400, p), p);
  double d = 0.0;
  for (double t = 0.0; t <= 2.0; t += 0.25) d = std::max(d, (exact_at(e2, t).u - exact_at(e4, t).u).cwiseAbs().maxCoeff());
  CHECK(d < 1e-3);
}

TEST_CASE("exact evolution invariants") {
  ModelParams p;
  const auto ev = make_exact(discretize_bath(Reservoir::Left, 60, p), discretize_bath(Reservoir::Right, 60, p), p);
  const Eigen::MatrixXcd g0 = ev.initial_covariance();
  for (double t : {0.7, 1.9}) {
    const Eigen::MatrixXcd u = ev.propagator(t);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(ev.dim(), ev.dim());
    CHECK((u * u.adjoint() - id).cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::MatrixXcd g = u * g0 * u.adjoint();
    CHECK(std::abs(g.trace() - g0.trace()) < 1e-10);

    const auto s = exact_at(ev, t);
    CHECK((s.v + s.vbar - (Mat2::Identity() - s.u * s.u.adjoint())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(s.quartic - quartic_noise_average(s.v, s.vbar)) < 1e-12);
    CHECK(std::abs(s.rho.trace() - 1.0) < 1e-12);
  }
}

TEST_CASE("Fock-space evolution confirms the Gaussian expressions") {
  ModelParams p;
  const auto l = discretize_bath(Reservoir::Left, 4, p, 3.0);
  const auto r = discretize_bath(Reservoir::Right, 4, p, 3.0);
  for (double t : {0.3, 1.2}) {
    const auto fc = fock_space_check(l, r, p, t);
    CHECK(fc.rho_error < 1e-12);
    CHECK(fc.quartic_error < 1e-12);
  }
  ModelParams warm = p;
  warm.left.beta = 1.0;
  CHECK_THROWS_AS(fock_space_check(l, r, warm, 0.3), ValidationError);
  CHECK_THROWS_AS(fock_space_check(discretize_bath(Reservoir::Left, 6, p), r, p, 0.3), ValidationError);
}

TEST_CASE("horizons past the recurrence bound are refused") {
  ModelParams p;
  const auto l = discretize_bath(Reservoir::Left, 40, p);
  const auto r = discretize_bath(Reservoir::Right, 40, p);
  const double safe = 40 * kPi / (2.0 * 10.0 * 2.0);
  CHECK(make_exact(l, r, p).safe_horizon == doctest::Approx(safe));
  CHECK_NOTHROW(exact_greens(l, r, p, TimeGrid::from_horizon(0.1, 2.0)));
  CHECK_THROWS_AS(exact_greens(l, r, p, TimeGrid::from_horizon(0.1, 4.0)), ValidationError);
}

TEST_CASE("propagator agrees with the discretized bath") {
  ModelParams p;
  const auto pg = solve_retarded(p, TimeGrid::from_horizon(1e-3, 2.0));
  const auto ev = make_exact(discretize_bath(Reservoir::Left, 400, p), discretize_bath(Reservoir::Right, 400, p), p);
  double d = 0.0;
  for (int k = 0; k < pg.size(); k += 50) d = std::max(d, (pg.u(k) - exact_at(ev, pg.grid.time(k)).u).cwiseAbs().maxCoeff());
  CHECK(d < 5e-3);
}
