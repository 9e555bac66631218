#include "qdd/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "qdd/density_matrix.hpp"

namespace qdd {

DiscretizedBath discretize_bath(Reservoir alpha, int n_modes, const ModelParams& p, double cutoff,
                                BathStrategy strategy) {
  if (n_modes < 2) throw ValidationError("discretize_bath: need at least 2 modes");
  if (!(cutoff > 0.0)) throw ValidationError("discretize_bath: cutoff must be > 0");
  (void)strategy;  // uniform midpoint grid is the only strategy
  const ReservoirParams& r = p.reservoir(alpha);
  DiscretizedBath b;
  b.reservoir = alpha;
  b.cutoff = cutoff;
  const double lo = r.mu - cutoff * r.width;
  b.spacing = 2.0 * cutoff * r.width / n_modes;
  for (int k = 0; k < n_modes; ++k) {
    const double e = lo + (k + 0.5) * b.spacing;
    b.energies.push_back(e);
    b.couplings.push_back(std::sqrt(lorentzian(r, e) * b.spacing / (2.0 * kPi)));
  }
  return b;
}

cplx discrete_kernel(const DiscretizedBath& bath, double dt) {
  cplx g = 0.0;
  for (int k = 0; k < bath.size(); ++k)
    g += bath.couplings[k] * bath.couplings[k] * std::exp(cplx(0.0, -bath.energies[k] * dt));
  return g;
}

ExactEvolution make_exact(const DiscretizedBath& left, const DiscretizedBath& right, const ModelParams& p) {
  p.validate();
  const int nl = left.size(), nr = right.size();
  const int dim = 2 + nl + nr;
  ExactEvolution ev;
  ev.hamiltonian = Eigen::MatrixXcd::Zero(dim, dim);
  ev.hamiltonian.topLeftCorner<2, 2>() = p.hamiltonian();
  ev.bath_occupation.resize(nl + nr);
  ev.safe_horizon = std::numeric_limits<double>::infinity();

  int idx = 2;
  for (const DiscretizedBath* b : {&left, &right}) {
    if (b->size() == 0) continue;
    const int d = coupled_dot(b->reservoir);
    const ReservoirParams& r = p.reservoir(b->reservoir);
    for (int k = 0; k < b->size(); ++k, ++idx) {
      ev.hamiltonian(idx, idx) = b->energies[k];
      ev.hamiltonian(d, idx) = b->couplings[k];
      ev.hamiltonian(idx, d) = b->couplings[k];
      ev.bath_occupation[idx - 2] = fermi_occupation(b->energies[k], r);
    }
    ev.safe_horizon = std::min(ev.safe_horizon, b->size() * kPi / (2.0 * b->cutoff * r.width));
  }
  ev.dot_occupation = p.initial_occupation;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ev.hamiltonian);
  ev.energies = es.eigenvalues();
  ev.modes = es.eigenvectors();
  return ev;
}

Eigen::MatrixXcd ExactEvolution::propagator(double t) const {
  Eigen::VectorXcd ph(energies.size());
  for (int i = 0; i < energies.size(); ++i) ph[i] = std::exp(cplx(0.0, -energies[i] * t));
  return modes * ph.asDiagonal() * modes.adjoint();
}

Eigen::MatrixXcd ExactEvolution::initial_covariance() const {
  const int d = dim();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
  g.topLeftCorner<2, 2>() = dot_occupation.transpose();
  for (int k = 0; k < bath_occupation.size(); ++k) g(2 + k, 2 + k) = bath_occupation[k];
  return g;
}

Mat4 gaussian_dot_state(const Mat2& c) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (c + c.adjoint()));
  const Eigen::Vector2d occ = es.eigenvalues();
  const Mat2& w = es.eigenvectors();
  Mat4 rho = Mat4::Zero();
  rho(0, 0) = occ[0] * occ[1];
  rho(3, 3) = (1.0 - occ[0]) * (1.0 - occ[1]);
  // One particle in natural orbital k, the other orbital empty.
  for (int k = 0; k < 2; ++k) {
    const double weight = occ[k] * (1.0 - occ[1 - k]);
    rho.block<2, 2>(1, 1) += weight * w.col(k) * w.col(k).adjoint();
  }
  return rho;
}

ExactSnapshot exact_at(const ExactEvolution& ev, double t) {
  const int dim = ev.dim();
  Eigen::VectorXcd ph(dim);
  for (int i = 0; i < dim; ++i) ph[i] = std::exp(cplx(0.0, -ev.energies[i] * t));
  const Eigen::MatrixXcd rows = ev.modes.topRows(2) * ph.asDiagonal() * ev.modes.adjoint();

  ExactSnapshot s;
  s.t = t;
  s.u = rows.leftCols(2);
  const int nb = dim - 2;
  const Eigen::MatrixXcd b = rows.rightCols(nb);
  const Eigen::VectorXd f = ev.bath_occupation;
  const Eigen::VectorXd fb = Eigen::VectorXd::Ones(nb) - f;
  s.v = b * f.cast<cplx>().asDiagonal() * b.adjoint();
  s.vbar = b * fb.cast<cplx>().asDiagonal() * b.adjoint();

  // <F1†F1F2†F2> contracted mode by mode with <b_k†b_l b_m†b_n> for a
  // diagonal thermal bath.
  double n1 = 0.0, n2 = 0.0;
  cplx x12 = 0.0, y12 = 0.0;
  for (int k = 0; k < nb; ++k) {
    n1 += std::norm(b(0, k)) * f[k];
    n2 += std::norm(b(1, k)) * f[k];
    x12 += std::conj(b(0, k)) * b(1, k) * f[k];
    y12 += b(0, k) * std::conj(b(1, k)) * fb[k];
  }
  s.quartic = (n1 * n2 + x12 * y12).real();

  s.correlation = rows * ev.initial_covariance() * rows.adjoint();
  s.rho = gaussian_dot_state(s.correlation);
  return s;
}

std::vector<ExactSnapshot> exact_greens(const DiscretizedBath& left, const DiscretizedBath& right,
                                        const ModelParams& p, const TimeGrid& grid) {
  grid.validate();
  const ExactEvolution ev = make_exact(left, right, p);
  if (grid.horizon() >= ev.safe_horizon) {
    std::ostringstream os;
    os << "oracle horizon " << grid.horizon() << " reaches the finite-bath recurrence bound; keep t < "
       << ev.safe_horizon;
    throw ValidationError(os.str());
  }
  std::vector<ExactSnapshot> out;
  out.reserve(grid.size());
  for (int k = 0; k < grid.size(); ++k) out.push_back(exact_at(ev, grid.time(k)));
  return out;
}

namespace {

using State = Eigen::VectorXcd;

// Jordan-Wigner: c_j carries the parity of modes below j; bit j = mode j.
State annihilate(int j, const State& in) {
  State out = State::Zero(in.size());
  const std::size_t bit = std::size_t(1) << j;
  for (std::size_t s = 0; s < static_cast<std::size_t>(in.size()); ++s) {
    if (!(s & bit) || in[s] == 0.0) continue;
    const int parity = std::popcount(s & (bit - 1)) & 1;
    out[s ^ bit] += parity ? -in[s] : in[s];
  }
  return out;
}

State create(int j, const State& in) {
  State out = State::Zero(in.size());
  const std::size_t bit = std::size_t(1) << j;
  for (std::size_t s = 0; s < static_cast<std::size_t>(in.size()); ++s) {
    if ((s & bit) || in[s] == 0.0) continue;
    const int parity = std::popcount(s & (bit - 1)) & 1;
    out[s | bit] += parity ? -in[s] : in[s];
  }
  return out;
}

// Σ_m coef[m] c_{offset+m} (or its adjoint) applied to a state.
State apply_mode_sum(const Eigen::RowVectorXcd& coef, int offset, const State& in, bool dagger) {
  State out = State::Zero(in.size());
  for (int m = 0; m < coef.size(); ++m) {
    if (coef[m] == 0.0) continue;
    out += (dagger ? std::conj(coef[m]) : coef[m]) * (dagger ? create(offset + m, in) : annihilate(offset + m, in));
  }
  return out;
}

}  // namespace

FockCheck fock_space_check(const DiscretizedBath& left, const DiscretizedBath& right, const ModelParams& p,
                           double t) {
  const ExactEvolution ev = make_exact(left, right, p);
  const int dim = ev.dim();
  if (dim > 10) throw ValidationError("fock_space_check: at most 8 bath modes in total");
  for (int k = 0; k < ev.bath_occupation.size(); ++k) {
    const double f = ev.bath_occupation[k];
    if (f != 0.0 && f != 1.0) throw ValidationError("fock_space_check: zero temperature required");
  }
  const Mat2& n0 = p.initial_occupation;
  for (int i = 0; i < 2; ++i) {
    const double x = n0(i, i).real();
    if ((x != 0.0 && x != 1.0) || std::abs(n0(0, 1)) != 0.0)
      throw ValidationError("fock_space_check: initial dot state must be a number state");
  }

  const std::size_t fock = std::size_t(1) << dim;
  std::size_t occupied = 0;
  for (int i = 0; i < 2; ++i)
    if (n0(i, i).real() == 1.0) occupied |= std::size_t(1) << i;
  for (int k = 0; k < ev.bath_occupation.size(); ++k)
    if (ev.bath_occupation[k] == 1.0) occupied |= std::size_t(1) << (2 + k);
  State psi0 = State::Zero(fock);
  psi0[occupied] = 1.0;

  // Many-body Hamiltonian Σ h_ij c_i† c_j, assembled column by column.
  Eigen::MatrixXcd hmb = Eigen::MatrixXcd::Zero(fock, fock);
  for (std::size_t s = 0; s < fock; ++s) {
    State e = State::Zero(fock);
    e[s] = 1.0;
    for (int j = 0; j < dim; ++j) {
      const State cj = annihilate(j, e);
      if (cj.isZero()) continue;
      for (int i = 0; i < dim; ++i) {
        if (ev.hamiltonian(i, j) == 0.0) continue;
        hmb.col(s) += ev.hamiltonian(i, j) * create(i, cj);
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hmb);
  Eigen::VectorXcd ph(fock);
  for (std::size_t i = 0; i < fock; ++i) ph[i] = std::exp(cplx(0.0, -es.eigenvalues()[i] * t));
  const State psi = es.eigenvectors() * (ph.asDiagonal() * (es.eigenvectors().adjoint() * psi0));

  // Reduced dot state; the dots are the lowest modes so no string crosses the cut.
  auto basis_index = [](std::size_t dots) {
    const bool n1 = dots & 1, n2 = dots & 2;
    return n1 ? (n2 ? 0 : 1) : (n2 ? 2 : 3);
  };
  Mat4 rho_fock = Mat4::Zero();
  for (std::size_t rest = 0; rest < (fock >> 2); ++rest)
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        rho_fock(basis_index(a), basis_index(b)) += psi[(rest << 2) | a] * std::conj(psi[(rest << 2) | b]);

  const ExactSnapshot snap = exact_at(ev, t);
  const Mat4 rho_wick = assemble_rho_at(snap.u, snap.v, snap.vbar, n0);

  // Noise operators F_i(t) = Σ_m B_im b_m(0) in the Heisenberg picture.
  Eigen::VectorXcd phs(dim);
  for (int i = 0; i < dim; ++i) phs[i] = std::exp(cplx(0.0, -ev.energies[i] * t));
  const Eigen::MatrixXcd rows = ev.modes.topRows(2) * phs.asDiagonal() * ev.modes.adjoint();
  const Eigen::RowVectorXcd b1 = rows.row(0).tail(dim - 2);
  const Eigen::RowVectorXcd b2 = rows.row(1).tail(dim - 2);
  State x = apply_mode_sum(b2, 2, psi0, false);
  x = apply_mode_sum(b2, 2, x, true);
  x = apply_mode_sum(b1, 2, x, false);
  x = apply_mode_sum(b1, 2, x, true);
  const double quartic_fock = psi0.dot(x).real();

  FockCheck fc;
  fc.rho_error = (rho_fock - rho_wick).cwiseAbs().maxCoeff();
  fc.quartic_error = std::abs(quartic_fock - quartic_noise_average(snap.v, snap.vbar));
  return fc;
}

}  // namespace qdd
