#include <cmath>

#include "doctest.h"
#include "qdd/observables.hpp"
#include "qdd/oracle.hpp"
#include "qdd/pipeline.hpp"

using namespace qdd;

namespace {

Mat4 bell_state() {
  Mat4 r = Mat4::Zero();
  r(1, 1) = r(2, 2) = r(1, 2) = r(2, 1) = 0.5;
  return r;
}

}  // namespace

TEST_CASE("measures on a diagonal state") {
  Mat4 r = Mat4::Zero();
  r.diagonal() << 0.5, 0.25, 0.25, 0.0;
  CHECK(l1_coherence(r) == 0.0);
  CHECK(relative_entropy_coherence(r) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(purity(r) == doctest::Approx(0.375));
  CHECK(von_neumann_entropy(r) == doctest::Approx(1.5));
  CHECK(shannon_entropy_diagonal(r) == doctest::Approx(1.5));
  CHECK(correlated_coherence(r) == doctest::Approx(0.0));
}

TEST_CASE("measures on the single-excitation Bell state") {
  const Mat4 r = bell_state();
  CHECK(l1_coherence(r) == doctest::Approx(1.0));
  CHECK(relative_entropy_coherence(r) == doctest::Approx(1.0));
  CHECK(purity(r) == doctest::Approx(1.0));
  CHECK(von_neumann_entropy(r) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mutual_information(r) == doctest::Approx(2.0));
  CHECK(correlated_coherence(r) == doctest::Approx(l1_coherence(r)));
  const auto b = bloch_coordinates(r);
  CHECK(b.valid);
  CHECK(b.x == doctest::Approx(1.0));
  CHECK(b.y == doctest::Approx(0.0));
  CHECK(b.z == doctest::Approx(0.0));
}

TEST_CASE("measures on the maximally mixed state") {
  const Mat4 r = Mat4::Identity() / 4.0;
  CHECK(purity(r) == doctest::Approx(0.25));
  CHECK(von_neumann_entropy(r) == doctest::Approx(2.0));
  CHECK(mutual_information(r) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(l1_coherence(r) == 0.0);
  const auto b = bloch_coordinates(r);
  CHECK(b.valid);
  CHECK(std::hypot(b.x, b.y, b.z) == doctest::Approx(0.0));
}

TEST_CASE("Bloch vector conventions") {
  Mat4 r = Mat4::Zero();
  r(2, 2) = 1.0;
  auto b = bloch_coordinates(r);
  CHECK(b.z == doctest::Approx(1.0));
  r(2, 2) = 0.0;
  r(1, 1) = 1.0;
  CHECK(bloch_coordinates(r).z == doctest::Approx(-1.0));
  r = Mat4::Zero();
  r(3, 3) = 1.0;
  CHECK_FALSE(bloch_coordinates(r).valid);
  r = bell_state();
  r(1, 2) = cplx(0.0, 0.5);
  r(2, 1) = cplx(0.0, -0.5);
  CHECK(bloch_coordinates(r).y == doctest::Approx(1.0));
}

TEST_CASE("steady-state detection") {
  const double dt = 0.01;
  std::vector<double> flat(2000, 0.3);
  CHECK(detect_steady_state({&flat}, dt, 1.0, 1e-4) == 0);
  std::vector<double> wave(2000);
  for (int k = 0; k < 2000; ++k) wave[k] = 0.1 * std::sin(3.0 * k * dt);
  CHECK_FALSE(detect_steady_state({&wave}, dt, 1.0, 1e-4).has_value());
  std::vector<double> relax(2000);
  for (int k = 0; k < 2000; ++k) relax[k] = std::exp(-k * dt);
  const auto on = detect_steady_state({&flat, &relax}, dt, 1.0, 1e-4);
  REQUIRE(on.has_value());
  // e^{-t} varies by less than 1e-4 over a unit window once e^{-t}(1 − 1/e) < 1e-4.
  CHECK(*on * dt == doctest::Approx(std::log((1.0 - std::exp(-1.0)) / 1e-4)).epsilon(2e-3));
}

TEST_CASE("isolated dots carry no current") {
  ModelParams p;
  p.left.gamma = 0.0;
  p.right.gamma = 0.0;
  EvolveOptions opt;
  opt.grid = TimeGrid::from_horizon(1e-3, 6.0);
  const auto res = evolve(p, opt);
  // Interior points only; the one-sided end stencils are first order.
  double m = 0.0;
  for (std::size_t k = 1; k + 1 < res.observables.current_left.size(); ++k)
    m = std::max({m, std::abs(res.observables.current_left[k]), std::abs(res.observables.current_right[k])});
  CHECK(m < 1e-5);
}

TEST_CASE("currents match reservoir depletion in the discretized bath") {
  ModelParams p;
  EvolveOptions opt;
  opt.grid = TimeGrid::from_horizon(1e-3, 2.0);
  const auto res = evolve(p, opt);
  const int n = 400;
  const auto ev = make_exact(discretize_bath(Reservoir::Left, n, p), discretize_bath(Reservoir::Right, n, p), p);
  const Eigen::MatrixXcd g0 = ev.initial_covariance();
  auto occupation = [&](double t, int first) {
    const Eigen::MatrixXcd u = ev.propagator(t);
    const Eigen::MatrixXcd g = u * g0 * u.adjoint();
    return g.diagonal().segment(first, n).real().sum();
  };
  const double h = 1e-4;
  for (int k : {250, 500, 1000, 1500, 2000 - 10}) {
    const double t = res.rho.grid.time(k);
    const double il = (occupation(t + h, 2) - occupation(t - h, 2)) / (2 * h);
    const double ir = (occupation(t + h, 2 + n) - occupation(t - h, 2 + n)) / (2 * h);
    CHECK(std::abs(res.observables.current_left[k] - il) < 2e-2);
    CHECK(std::abs(res.observables.current_right[k] - ir) < 2e-2);
  }
}

TEST_CASE("zero bias gives no steady current") {
  ModelParams p;
  p.left.mu = 0.0;
  p.right.mu = 0.0;
  EvolveOptions opt;
  opt.grid = TimeGrid::from_horizon(5e-3, 30.0);
  const auto res = evolve(p, opt);
  CHECK(res.summary.steady_current < 1e-4);
  CHECK(res.summary.converged);
}

TEST_CASE("observable series on the default run") {
  ModelParams p;
  EvolveOptions opt;
  opt.grid = TimeGrid::from_horizon(1e-3, 4.0);
  const auto res = evolve(p, opt);
  const auto& o = res.observables;
  CHECK(o.c_l1.front() == 0.0);
  CHECK(o.purity.front() == doctest::Approx(1.0));
  for (std::size_t k = 0; k < o.c_l1.size(); ++k) {
    CHECK(o.c_l1[k] >= 0.0);
    CHECK(o.purity[k] <= 1.0 + 1e-12);
    CHECK(o.mutual_information[k] >= -1e-10);
    CHECK(std::abs(o.correlated_coherence[k] - o.c_l1[k]) < 1e-12);
  }
}
