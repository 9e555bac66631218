#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "doctest.h"
#include "qdd/model.hpp"

using namespace qdd;

namespace {

// ∫ dε/2π J(ε) e^{−iε s} for the Lorentzian, by direct quadrature. Shifting
// by μ leaves an even integrand, so only the cosine transform survives.
cplx kernel_by_quadrature(const ReservoirParams& r, double s) {
  const double w = r.width;
  auto f = [w](double x) { return 1.0 / (x * x + w * w); };
  double half = 0.0;
  if (s == 0.0) {
    boost::math::quadrature::exp_sinh<double> integrator;
    half = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
  } else {
    boost::math::quadrature::ooura_fourier_cos<double> integrator;
    half = integrator.integrate(f, s).first;
  }
  return r.gamma * w * w / (2.0 * kPi) * 2.0 * half * std::exp(cplx(0.0, -r.mu * s));
}

}  // namespace

TEST_CASE("spectral density is a Lorentzian on the coupled dot") {
  ModelParams p;
  const auto jl = spectral_density(Reservoir::Left, p.left.mu, p);
  CHECK(jl(0, 0) == doctest::Approx(5.0));
  CHECK(jl(1, 1) == 0.0);
  CHECK(jl(0, 1) == 0.0);
  CHECK(spectral_density(Reservoir::Left, p.left.mu + p.left.width, p)(0, 0) == doctest::Approx(2.5));
  CHECK(spectral_density(Reservoir::Left, p.left.mu - p.left.width, p)(0, 0) == doctest::Approx(2.5));

  for (double e : {-40.0, -5.0, 0.0, 1.3, 7.0}) {
    const auto jr = spectral_density(Reservoir::Right, e, p);
    CHECK(jr(0, 0) == 0.0);
    const double x = e - p.right.mu;
    CHECK(jr(1, 1) == doctest::Approx(5.0 * 4.0 / (x * x + 4.0)));
    CHECK(jr(0, 1) == 0.0);
    CHECK(jr(1, 0) == 0.0);
  }
}

TEST_CASE("fermi occupation") {
  ReservoirParams r{1.0, 1.0, 0.7, 1.0};
  CHECK(fermi_occupation(0.7, r) == doctest::Approx(0.5));
  CHECK(fermi_occupation(1.7, r) == doctest::Approx(1.0 / (std::exp(1.0) + 1.0)).epsilon(1e-12));
  CHECK(fermi_occupation(1.7, r) == doctest::Approx(0.268941).epsilon(1e-6));

  ReservoirParams cold{1.0, 1.0, 0.7, std::nullopt};
  CHECK(fermi_occupation(0.0, cold) == 1.0);
  CHECK(fermi_occupation(2.0, cold) == 0.0);
  CHECK(fermi_occupation(0.7, cold) == 0.5);

  SUBCASE("monotone non-increasing") {
    for (double beta : {0.1, 1.0, 50.0, 1e4}) {
      ReservoirParams t{1.0, 1.0, 0.0, beta};
      double prev = 1.0;
      for (double e = -30.0; e <= 30.0; e += 0.01) {
        const double f = fermi_occupation(e, t);
        CHECK(f <= prev);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        prev = f;
      }
    }
  }

  SUBCASE("large beta approaches the step away from mu") {
    const ReservoirParams step{1.0, 1.0, 0.0, std::nullopt};
    for (double e : {-1.0, -0.1, 0.05, 2.0}) {
      double prev_gap = 1.0;
      for (double beta : {10.0, 100.0, 1000.0}) {
        const double gap = std::abs(fermi_occupation(e, ReservoirParams{1.0, 1.0, 0.0, beta}) - fermi_occupation(e, step));
        CHECK(gap <= prev_gap);
        prev_gap = gap;
      }
      CHECK(prev_gap < 1e-12);
    }
  }
}

TEST_CASE("memory kernel") {
  ModelParams p;
  const Mat2 g0 = memory_kernel(Reservoir::Left, 0.0, p);
  CHECK(g0(0, 0).real() == doctest::Approx(5.0));
  CHECK(g0(0, 0).imag() == doctest::Approx(0.0));
  CHECK(g0(1, 1) == cplx(0.0));
  CHECK(g0(0, 1) == cplx(0.0));
  CHECK(g0(1, 0) == cplx(0.0));

  const Mat2 gr = memory_kernel(Reservoir::Right, 0.8, p);
  CHECK(gr(0, 0) == cplx(0.0));
  CHECK(gr(0, 1) == cplx(0.0));

  const Mat2 g1 = memory_kernel(Reservoir::Left, 1.0 / p.left.width, p);
  CHECK(std::abs(g1(0, 0)) == doctest::Approx(5.0 * std::exp(-1.0)));

  CHECK_THROWS_AS(memory_kernel(Reservoir::Left, -0.1, p), ValidationError);
}

TEST_CASE("memory kernel matches Fourier quadrature of the spectral density") {
  ModelParams p;
  p.right.width = 0.7;
  p.right.mu = -1.3;
  for (Reservoir r : kReservoirs) {
    const ReservoirParams& rp = p.reservoir(r);
    const int d = coupled_dot(r);
    const cplx q0 = kernel_by_quadrature(rp, 0.0);
    CHECK(std::abs(q0 - memory_kernel(r, 0.0, p)(d, d)) / std::abs(q0) < 1e-6);
    for (double x = 0.25; x <= 20.0; x += 0.25) {
      const double s = x / rp.width;
      const cplx q = kernel_by_quadrature(rp, s);
      const cplx g = memory_kernel(r, s, p)(d, d);
      INFO("reservoir " << name(r) << " dt*W = " << x);
      CHECK(std::abs(q - g) / std::abs(g) < 1e-6);
    }
  }
}

TEST_CASE("parameter validation names the key") {
  ModelParams p;
  p.right.width = -1.0;
  try {
    p.validate();
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("w_R") != std::string::npos);
  }
  ModelParams q;
  q.left.gamma = -0.5;
  CHECK_THROWS_AS(q.validate(), ValidationError);
  ModelParams b;
  b.left.beta = 0.0;
  CHECK_THROWS_AS(b.validate(), ValidationError);
  ModelParams n;
  n.initial_occupation << 0.5, 0.6, 0.6, 0.5;  // eigenvalue 1.1
  CHECK_THROWS_AS(n.validate(), ValidationError);
  ModelParams h;
  h.initial_occupation << 0.5, cplx(0.1, 0.1), cplx(0.1, 0.1), 0.5;
  CHECK_THROWS_AS(h.validate(), ValidationError);

  SpectralConfig c;
  c.nodes = 1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.nodes = 2;
  c.cutoff = 4.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("hamiltonian is Hermitian for complex hopping") {
  ModelParams p;
  p.eps12 = cplx(0.3, -0.2);
  const Mat2 h = p.hamiltonian();
  CHECK((h - h.adjoint()).norm() == 0.0);
  CHECK(h(1, 0) == std::conj(p.eps12));
}
