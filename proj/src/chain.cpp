#include "iongate/chain.hpp"

#include <cmath>

#include "iongate/constants.hpp"
#include "iongate/error.hpp"

namespace iongate {

void chain_config::validate() const {
  if (n < 1) throw invalid_argument_error("chain: need N >= 1");
  if (!(mass_kg > 0)) throw invalid_argument_error("chain: mass must be > 0");
  if (!(omega_y > 0 && omega_x > 0 && omega_z > 0))
    throw invalid_argument_error("chain: all trap frequencies must be > 0");
}

double chain_length_scale(const chain_config& cfg) {
  const auto& c = codata();
  const double e2 = c.elementary_charge * c.elementary_charge / (4.0 * M_PI * c.epsilon0);
  return std::cbrt(e2 / (cfg.mass_kg * cfg.omega_y * cfg.omega_y));
}

namespace {

// Dimensionless axial potential gradient and Hessian (positions in units of
// the Coulomb length scale).
Eigen::VectorXd grad_dimless(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  Eigen::VectorXd g = u;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = u(i) - u(j);
      g(i) -= (d > 0 ? 1.0 : -1.0) / (d * d);
    }
  return g;
}

Eigen::MatrixXd axial_hessian_dimless(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d3 = std::pow(std::abs(u(i) - u(j)), 3);
      h(i, i) += 2.0 / d3;
      h(i, j) -= 2.0 / d3;
    }
  return h;
}

}  // namespace

Eigen::VectorXd equilibrium_positions(const chain_config& cfg) {
  cfg.validate();
  const int n = cfg.n;
  if (n == 1) return Eigen::VectorXd::Zero(1);
  // uniform-spacing initial guess; spacing ~ 2 (1.0772/..) works for N <= 20
  Eigen::VectorXd u(n);
  const double span = 2.0 * std::pow(n, 0.56);
  for (int i = 0; i < n; ++i) u(i) = -span / 2 + span * i / (n - 1);

  Eigen::VectorXd g = grad_dimless(u);
  int it = 0;
  for (; it < 200 && g.cwiseAbs().maxCoeff() > 1e-13; ++it) {
    const Eigen::VectorXd step = axial_hessian_dimless(u).ldlt().solve(-g);
    double damp = 1.0;
    for (int half = 0; half < 40; ++half) {
      Eigen::VectorXd cand = u + damp * step;
      bool ordered = true;
      for (int i = 1; i < n; ++i)
        if (cand(i) <= cand(i - 1)) ordered = false;
      if (ordered) {
        const Eigen::VectorXd gc = grad_dimless(cand);
        if (gc.cwiseAbs().maxCoeff() < g.cwiseAbs().maxCoeff() || damp < 1e-4) {
          u = cand;
          g = gc;
          break;
        }
      }
      damp *= 0.5;
    }
  }
  if (g.cwiseAbs().maxCoeff() > 1e-12)
    throw convergence_error("equilibrium_positions: Newton residual " +
                            std::to_string(g.cwiseAbs().maxCoeff()) + " (dimensionless)");
  // enforce the exact antisymmetry the potential guarantees
  for (int i = 0; i < n / 2; ++i) {
    const double s = 0.5 * (u(i) - u(n - 1 - i));
    u(i) = s;
    u(n - 1 - i) = -s;
  }
  if (n % 2 == 1) u(n / 2) = 0.0;
  return u * chain_length_scale(cfg);
}

double ground_state_extent(double mass_kg, double omega_j) {
  if (!(mass_kg > 0 && omega_j > 0))
    throw invalid_argument_error("ground_state_extent: inputs must be positive");
  return std::sqrt(codata().hbar / (2.0 * mass_kg * omega_j));
}

mode_decomposition normal_modes(const chain_config& cfg, mode_axis axis) {
  cfg.validate();
  const Eigen::VectorXd pos = equilibrium_positions(cfg);
  const Eigen::VectorXd u = pos / chain_length_scale(cfg);
  const int n = cfg.n;

  const Eigen::MatrixXd a = axial_hessian_dimless(u);
  Eigen::MatrixXd h;  // dimensionless Hessian in units of m omega_y^2
  double omega_t = cfg.omega_y;
  if (axis == mode_axis::y) {
    h = a;
  } else {
    omega_t = (axis == mode_axis::x) ? cfg.omega_x : cfg.omega_z;
    const double alpha = (omega_t / cfg.omega_y) * (omega_t / cfg.omega_y);
    // transverse Hessian = (alpha + 1/2) I - A/2
    h = (alpha + 0.5) * Eigen::MatrixXd::Identity(n, n) - 0.5 * a;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);

  mode_decomposition out;
  out.axis = axis;
  out.positions = pos;
  for (int k = 0; k < n; ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda <= 0)
      throw convergence_error("normal_modes: unstable mode " + std::to_string(k) +
                              " (lambda = " + std::to_string(lambda) +
                              "), chain not linear at these frequencies");
    chain_mode m;
    m.omega = cfg.omega_y * std::sqrt(lambda);
    Eigen::VectorXd b = es.eigenvectors().col(k);
    // fix the overall sign: first nonzero component positive
    for (int i = 0; i < n; ++i) {
      if (std::abs(b(i)) > 1e-12) {
        if (b(i) < 0) b = -b;
        break;
      }
    }
    m.b = b;
    m.q0 = ground_state_extent(cfg.mass_kg, m.omega);
    out.modes.push_back(m);
  }
  return out;
}

chain_mode two_ion_rocking_mode(double mass_kg, double omega_j) {
  chain_mode m;
  m.omega = omega_j;
  m.b = Eigen::Vector2d(1.0, -1.0) / std::sqrt(2.0);
  m.q0 = ground_state_extent(mass_kg, omega_j);
  return m;
}

chain_mode two_ion_com_mode(double mass_kg, double omega_j) {
  chain_mode m;
  m.omega = omega_j;
  m.b = Eigen::Vector2d(1.0, 1.0) / std::sqrt(2.0);
  m.q0 = ground_state_extent(mass_kg, omega_j);
  return m;
}

}  // namespace iongate
