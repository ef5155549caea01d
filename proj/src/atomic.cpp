#include "iongate/atomic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "iongate/constants.hpp"
#include "iongate/error.hpp"

namespace iongate {

namespace {

using cd = std::complex<double>;

// Angular momentum matrices for spin j in the |m> basis, m descending.
struct spin_ops {
  Eigen::MatrixXd jx, jz;
  Eigen::MatrixXcd jy;
};

spin_ops make_spin_ops(double j) {
  const int dim = static_cast<int>(std::lround(2 * j + 1));
  Eigen::MatrixXd jp = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd jz = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = j - k;
    jz(k, k) = m;
    if (k > 0) jp(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));  // <m+1|J+|m>
  }
  const Eigen::MatrixXd jm = jp.transpose();
  spin_ops ops;
  ops.jx = 0.5 * (jp + jm);
  ops.jy = cd(0, -0.5) * (jp - jm).cast<cd>();
  ops.jz = jz;
  return ops;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Everything needed about the product space of one species, built on demand.
struct product_space {
  int dim;
  Eigen::MatrixXd i_dot_j;      // I.J
  Eigen::MatrixXd jz_tot, iz_tot, jx_tot, ix_tot;
  Eigen::VectorXd mf;           // mF of each product basis state
};

product_space make_space(const ion_species& s) {
  s.validate();
  const double i_spin = s.nuclear_spin;
  const spin_ops j_ops = make_spin_ops(0.5);
  const spin_ops i_ops = make_spin_ops(i_spin);
  const int di = static_cast<int>(std::lround(2 * i_spin + 1));
  product_space sp;
  sp.dim = 2 * di;
  const Eigen::MatrixXd id_j = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd id_i = Eigen::MatrixXd::Identity(di, di);
  // Jy x Iy is real (both purely imaginary antisymmetric).
  const Eigen::MatrixXd jy_iy =
      (kron(j_ops.jy.imag(), i_ops.jy.imag()) * -1.0);
  sp.i_dot_j = kron(j_ops.jx, i_ops.jx) + jy_iy + kron(j_ops.jz, i_ops.jz);
  sp.jz_tot = kron(j_ops.jz, id_i);
  sp.iz_tot = kron(id_j, i_ops.jz);
  sp.jx_tot = kron(j_ops.jx, id_i);
  sp.ix_tot = kron(id_j, i_ops.jx);
  sp.mf = (sp.jz_tot + sp.iz_tot).diagonal();
  return sp;
}

Eigen::MatrixXd hamiltonian_hz(const ion_species& s, const product_space& sp, double b) {
  const auto& c = codata();
  return s.hyperfine_a_hz * sp.i_dot_j +
         (c.mu_b * b / c.h) * (s.g_j * sp.jz_tot + s.g_i * sp.iz_tot);
}

// Lande interval energy of an F manifold, Hz relative to centroid, J = 1/2.
double lande_energy(double a_hz, double i_spin, double f) {
  return 0.5 * a_hz * (f * (f + 1) - i_spin * (i_spin + 1) - 0.75);
}

// Zero-field levels, diagonalized per mF block so the (F, mF) eigenbasis is
// unambiguous despite the F-manifold degeneracy.
std::vector<zeeman_level> zero_field_levels(const ion_species& s, const product_space& sp) {
  std::vector<zeeman_level> out;
  const double i_spin = s.nuclear_spin;
  const double f_hi = i_spin + 0.5;
  const double f_lo = std::abs(i_spin - 0.5);
  const Eigen::MatrixXd h0 = hamiltonian_hz(s, sp, 0.0);
  // group basis indices by mF
  for (double mf = -f_hi; mf <= f_hi + 1e-9; mf += 1.0) {
    std::vector<int> idx;
    for (int k = 0; k < sp.dim; ++k)
      if (std::abs(sp.mf(k) - mf) < 1e-9) idx.push_back(k);
    if (idx.empty()) continue;
    Eigen::MatrixXd block(idx.size(), idx.size());
    for (size_t a = 0; a < idx.size(); ++a)
      for (size_t b = 0; b < idx.size(); ++b) block(a, b) = h0(idx[a], idx[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
    for (size_t k = 0; k < idx.size(); ++k) {
      zeeman_level lev;
      lev.energy_hz = es.eigenvalues()(k);
      // F from the interval rule; each block holds at most one state per F
      const double e_hi = lande_energy(s.hyperfine_a_hz, i_spin, f_hi);
      const double e_lo = lande_energy(s.hyperfine_a_hz, i_spin, f_lo);
      lev.label.f = (std::abs(lev.energy_hz - e_hi) <= std::abs(lev.energy_hz - e_lo)) ? f_hi : f_lo;
      lev.label.mf = mf;
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(sp.dim);
      for (size_t a = 0; a < idx.size(); ++a) v(idx[a]) = es.eigenvectors()(a, k);
      lev.eigenvector = v;
      out.push_back(lev);
    }
  }
  return out;
}

void sort_levels(std::vector<zeeman_level>& levels) {
  std::sort(levels.begin(), levels.end(), [](const zeeman_level& a, const zeeman_level& b) {
    if (a.label.f != b.label.f) return a.label.f < b.label.f;
    return a.label.mf < b.label.mf;
  });
}

}  // namespace

Eigen::MatrixXd hyperfine_hamiltonian(const ion_species& species, double b_tesla) {
  if (b_tesla < 0) throw invalid_argument_error("hyperfine_hamiltonian: B must be >= 0");
  const product_space sp = make_space(species);
  return hamiltonian_hz(species, sp, b_tesla);
}

std::vector<zeeman_level> breit_rabi_levels(const ion_species& species, double b_tesla) {
  if (b_tesla < 0) throw invalid_argument_error("breit_rabi_levels: B must be >= 0");
  const product_space sp = make_space(species);
  std::vector<zeeman_level> levels = zero_field_levels(species, sp);
  if (b_tesla == 0.0) {
    sort_levels(levels);
    return levels;
  }
  // Continue adiabatically from B=0 in steps <= 0.1 mT; eigenvalue ordering
  // alone is ambiguous near degeneracies, eigenvector overlap is not.
  const double step_max = 1e-4;
  const int nsteps = std::max(1, static_cast<int>(std::ceil(b_tesla / step_max)));
  const double db = b_tesla / nsteps;
  for (int s = 1; s <= nsteps; ++s) {
    const double b = s * db;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian_hz(species, sp, b));
    std::vector<bool> used(sp.dim, false);
    for (auto& lev : levels) {
      int best = -1;
      double best_ov = 0.0;
      for (int k = 0; k < sp.dim; ++k) {
        if (used[k]) continue;
        const double ov = std::abs(lev.eigenvector.real().dot(es.eigenvectors().col(k)));
        if (ov > best_ov) {
          best_ov = ov;
          best = k;
        }
      }
      if (best < 0 || best_ov * best_ov < 0.5)
        throw convergence_error("breit_rabi_levels: adiabatic label tracking failed near B = " +
                                std::to_string(b) + " T (overlap^2 = " +
                                std::to_string(best_ov * best_ov) + ")");
      used[best] = true;
      Eigen::VectorXd v = es.eigenvectors().col(best);
      if (lev.eigenvector.real().dot(v) < 0) v = -v;  // keep phase continuous
      lev.eigenvector = v.cast<cd>();
      lev.energy_hz = es.eigenvalues()(best);
    }
  }
  sort_levels(levels);
  return levels;
}

const zeeman_level& find_level(const std::vector<zeeman_level>& levels, const level_label& label) {
  for (const auto& lev : levels)
    if (std::abs(lev.label.f - label.f) < 1e-9 && std::abs(lev.label.mf - label.mf) < 1e-9)
      return lev;
  throw invalid_argument_error("find_level: no level (F=" + std::to_string(label.f) +
                               ", mF=" + std::to_string(label.mf) + ")");
}

double transition_frequency(const ion_species& species, const level_label& a,
                            const level_label& b, double b_tesla) {
  if (a == b) throw invalid_argument_error("transition_frequency: identical levels");
  const auto levels = breit_rabi_levels(species, b_tesla);
  const double ea = find_level(levels, a).energy_hz;
  const double eb = find_level(levels, b).energy_hz;
  return 2.0 * M_PI * std::abs(ea - eb);
}

std::complex<double> dipole_matrix_element(const ion_species& species, const level_label& a,
                                           const level_label& b, dipole_axis axis,
                                           double b_tesla) {
  const product_space sp = make_space(species);
  const auto levels = breit_rabi_levels(species, b_tesla);
  const Eigen::VectorXcd& va = find_level(levels, a).eigenvector;
  const Eigen::VectorXcd& vb = find_level(levels, b).eigenvector;
  const auto& c = codata();
  Eigen::MatrixXd mu;
  if (axis == dipole_axis::x)
    mu = -c.mu_b * (species.g_j * sp.jx_tot + species.g_i * sp.ix_tot);
  else
    mu = -c.mu_b * (species.g_j * sp.jz_tot + species.g_i * sp.iz_tot);
  return va.adjoint() * (mu * vb);
}

namespace {

double omega0_of(const ion_species& s, const level_label& a, const level_label& b, double field) {
  return transition_frequency(s, a, b, field);
}

}  // namespace

clock_point field_independent_point(const ion_species& species, const level_label& a,
                                    const level_label& b, double b_lo, double b_hi) {
  if (!(b_lo >= 0 && b_hi > b_lo))
    throw invalid_argument_error("field_independent_point: need 0 <= b_lo < b_hi");
  const double h = 1e-6;  // T, central-difference step
  auto slope = [&](double field) {
    return (omega0_of(species, a, b, field + h) - omega0_of(species, a, b, field - h)) / (2 * h);
  };
  double lo = std::max(b_lo, h), hi = b_hi;
  double slo = slope(lo), shi = slope(hi);
  if (slo == 0.0) hi = lo;
  else if (shi == 0.0) lo = hi;
  else if (slo * shi > 0)
    throw convergence_error("field_independent_point: no stationary point in bracket [" +
                            std::to_string(b_lo) + ", " + std::to_string(b_hi) + "] T");
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    const double sm = slope(mid);
    if (sm == 0.0) { lo = hi = mid; break; }
    if (sm * slo > 0) { lo = mid; slo = sm; } else { hi = mid; }
  }
  clock_point cp;
  cp.b_tesla = 0.5 * (lo + hi);
  const double h2 = 1e-4;
  cp.second_derivative =
      (slope(cp.b_tesla + h2) - slope(cp.b_tesla - h2)) / (2 * h2);
  const double w0 = omega0_of(species, a, b, cp.b_tesla);
  if (std::abs(slope(cp.b_tesla)) >= 1e-6 * w0)
    throw convergence_error("field_independent_point: residual slope " +
                            std::to_string(slope(cp.b_tesla)) + " rad/s/T exceeds tolerance");
  return cp;
}

qubit_pair make_qubit_pair(const ion_species& species, const level_label& up,
                           const level_label& down, double b_tesla) {
  const auto levels = breit_rabi_levels(species, b_tesla);
  qubit_pair p;
  p.species = species;
  p.up = find_level(levels, up);
  p.down = find_level(levels, down);
  p.b0_tesla = b_tesla;
  p.omega0 = 2.0 * M_PI * (p.up.energy_hz - p.down.energy_hz);
  if (!(p.omega0 > 0))
    throw invalid_argument_error("make_qubit_pair: E_up must exceed E_down (omega0 > 0)");
  p.mu_z_up = dipole_matrix_element(species, up, up, dipole_axis::z, b_tesla).real();
  p.mu_z_down = dipole_matrix_element(species, down, down, dipole_axis::z, b_tesla).real();
  p.mu_x_updown = std::abs(dipole_matrix_element(species, down, up, dipole_axis::x, b_tesla));
  return p;
}

}  // namespace iongate
