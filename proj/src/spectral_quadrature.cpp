#include "qdd/spectral_quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "qdd/propagator.hpp"

namespace qdd {

void gauss_panel(double a, double b, std::vector<double>& x, std::vector<double>& w) {
  using rule = boost::math::quadrature::gauss<double, 16>;
  const auto& abs = rule::abscissa();
  const auto& wts = rule::weights();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  // Ordered left to right so the summation order is fixed.
  for (int i = static_cast<int>(abs.size()) - 1; i >= 0; --i) {
    x.push_back(mid - half * abs[i]);
    w.push_back(half * wts[i]);
  }
  for (std::size_t i = 0; i < abs.size(); ++i) {
    if (abs[i] == 0.0) continue;
    x.push_back(mid + half * abs[i]);
    w.push_back(half * wts[i]);
  }
}

int SpectralQuadrature::node_count() const {
  int n = 0;
  for (const auto& r : res) n += static_cast<int>(r.core.size() + r.tail.size() + r.ray.size());
  return n;
}

namespace {

constexpr int kTailPanels = 8;

template <class T>
T lorentzian_c(const ReservoirParams& r, T eps) {
  const T x = eps - r.mu;
  return r.gamma * r.width * r.width / (x * x + r.width * r.width);
}

// Occupation continued off the real axis; `above` selects the zero-temperature
// branch for the whole tail, which never straddles μ.
cplx occupation_c(const ReservoirParams& r, cplx eps, bool above) {
  if (!r.beta) return above ? 0.0 : 1.0;
  const cplx z = *r.beta * (eps - r.mu);
  if (z.real() > 0.0) {
    const cplx e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

struct Feature {
  double x;
  double width;
};

RowBlock resolvent(const Mat6& m, cplx eps) {
  const Mat6 a = m + kI * eps * Mat6::Identity();
  return a.partialPivLu().inverse().topRows<2>();
}

ReservoirQuadrature build_one(const ModelParams& p, const SpectralConfig& cfg, double horizon,
                              Reservoir alpha, const Mat6& m, const std::vector<Feature>& feats) {
  const ReservoirParams& rp = p.reservoir(alpha);
  const int d = coupled_dot(alpha);
  ReservoirQuadrature q;
  q.reservoir = alpha;
  if (rp.gamma == 0.0) return q;

  double xmin = rp.mu, xmax = rp.mu;
  for (const Feature& f : feats) {
    xmin = std::min(xmin, f.x);
    xmax = std::max(xmax, f.x);
  }
  const double margin = cfg.cutoff * std::min(rp.width, 1.0);
  q.lo = xmin - margin;
  q.hi = xmax + margin;
  const double span = q.hi - q.lo;

  // Breakpoints: core ends, the occupation step, and a geometric grading
  // around every pole so panels near a narrow feature shrink to its width.
  std::vector<double> br{q.lo, q.hi, rp.mu};
  std::vector<Feature> graded = feats;
  graded.push_back({rp.mu, rp.width});
  if (rp.beta) graded.push_back({rp.mu, 1.0 / *rp.beta});
  for (const Feature& f : graded) {
    if (!(f.width > 0.0)) continue;
    br.push_back(f.x);
    for (double s = 0.25 * f.width; s < span; s *= 2.0) {
      br.push_back(f.x - s);
      br.push_back(f.x + s);
    }
  }
  std::sort(br.begin(), br.end());
  std::vector<double> cuts;
  for (double b : br) {
    if (b < q.lo || b > q.hi) continue;
    if (!cuts.empty() && b - cuts.back() < 1e-12 * span) continue;
    cuts.push_back(b);
  }

  // Panel width cap: base resolution from the node budget, and no more than
  // about 12 radians of e^{-iεt} phase per panel at the horizon.
  const int base_panels = std::max(1, cfg.nodes / 16);
  double hmax = span / base_panels;
  if (horizon > 0.0) hmax = std::min(hmax, 12.0 / horizon);

  std::vector<double> xs, ws;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / hmax)));
    for (int k = 0; k < n; ++k) gauss_panel(a + (b - a) * k / n, a + (b - a) * (k + 1) / n, xs, ws);
  }
  q.core.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double jw = ws[i] * lorentzian(rp, xs[i]) / (2.0 * kPi);
    const double f = fermi_occupation(xs[i], rp);
    q.core.push_back({xs[i], jw * f, jw * (1.0 - f), resolvent(m, xs[i])});
  }

  // Smooth tail parts on ε = A ± S tan θ.
  const double scale = margin;
  for (int side : {-1, 1}) {
    const double a_end = side > 0 ? q.hi : q.lo;
    std::vector<double> th, wt;
    for (int k = 0; k < kTailPanels; ++k)
      gauss_panel(0.5 * kPi * k / kTailPanels, 0.5 * kPi * (k + 1) / kTailPanels, th, wt);
    for (std::size_t i = 0; i < th.size(); ++i) {
      const double c = std::cos(th[i]);
      const double eps = a_end + side * scale * std::tan(th[i]);
      const double jw = wt[i] * scale / (c * c) * lorentzian(rp, eps) / (2.0 * kPi);
      const double f = fermi_occupation(eps, rp);
      q.tail.push_back({eps, jw * f, jw * (1.0 - f), resolvent(m, eps)});
    }
  }

  // Oscillatory cross term rotated onto ε = A + iy, y = S tan φ, with
  // geometric panels toward y = 0 so that e^{-yt} is resolved up to the horizon.
  const Mat6 mc = m.conjugate();
  const int levels =
      std::max(4, static_cast<int>(std::ceil(std::log2(0.5 * kPi * scale * std::max(horizon, 1.0)))) + 2);
  std::vector<double> phi_cuts{0.0};
  for (int k = levels; k >= 1; --k) phi_cuts.push_back(0.5 * kPi * std::ldexp(1.0, -k));
  phi_cuts.push_back(0.5 * kPi);
  for (int side : {-1, 1}) {
    const double a_end = side > 0 ? q.hi : q.lo;
    const cplx rot = side > 0 ? kI : -kI;
    std::vector<double> ph, wp;
    for (std::size_t k = 0; k + 1 < phi_cuts.size(); ++k) gauss_panel(phi_cuts[k], phi_cuts[k + 1], ph, wp);
    for (std::size_t i = 0; i < ph.size(); ++i) {
      const double c = std::cos(ph[i]);
      const double y = scale * std::tan(ph[i]);
      const double dy = wp[i] * scale / (c * c);
      const cplx eps(a_end, y);
      const cplx jw = rot * dy * lorentzian_c(rp, eps) / (2.0 * kPi);
      const cplx f = occupation_c(rp, eps, side > 0);
      const Mat6 ac = mc - kI * eps * Mat6::Identity();
      const Vec2 rc = ac.partialPivLu().inverse().topRows<2>().col(d);
      q.ray.push_back({eps, jw * f, jw * (1.0 - f), resolvent(m, eps), rc});
    }
  }
  return q;
}

}  // namespace

SpectralQuadrature build_spectral_quadrature(const ModelParams& p, const SpectralConfig& cfg,
                                             double horizon) {
  p.validate();
  cfg.validate();
  const Mat6 m = generator_matrix(p);
  std::vector<Feature> feats;
  // Resolvent poles sit at ε = iλ; their real parts must stay inside the core
  // so the rotated rays never cross one.
  const Eigen::Matrix<cplx, 6, 1> lam = m.eigenvalues();
  for (int k = 0; k < 6; ++k) feats.push_back({-lam[k].imag(), -lam[k].real()});
  for (Reservoir r : kReservoirs) feats.push_back({p.reservoir(r).mu, p.reservoir(r).width});

  SpectralQuadrature sq;
  sq.horizon = horizon;
  for (Reservoir r : kReservoirs)
    sq.res[static_cast<int>(r)] = build_one(p, cfg, horizon, r, m, feats);
  return sq;
}

}  // namespace qdd
