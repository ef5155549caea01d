#include "iongate/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "iongate/constants.hpp"
#include "iongate/error.hpp"

namespace iongate {

namespace {

using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

MatrixXcd sigma_plus() {
  MatrixXcd m = MatrixXcd::Zero(2, 2);
  m(0, 1) = 1;  // |u><d|
  return m;
}

MatrixXcd sigma_z() {
  MatrixXcd m = MatrixXcd::Zero(2, 2);
  m(0, 0) = 1;
  m(1, 1) = -1;
  return m;
}

MatrixXcd lowering(int n_max) {
  MatrixXcd a = MatrixXcd::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace

int hilbert_spec::fock_dimension() const {
  int d = 1;
  for (const auto& m : modes) d *= m.n_max + 1;
  return d;
}

int hilbert_spec::dimension() const {
  if (n_qubits < 1) throw invalid_argument_error("hilbert_spec: need >= 1 qubit");
  for (const auto& m : modes) {
    if (m.n_max < 4) throw invalid_argument_error("hilbert_spec: Fock cutoff must be >= 4");
    if (!(m.omega > 0)) throw invalid_argument_error("hilbert_spec: mode frequency must be > 0");
  }
  const int d = (1 << n_qubits) * fock_dimension();
  if (d > max_dimension)
    throw invalid_argument_error("hilbert_spec: dimension " + std::to_string(d) +
                                 " exceeds cap " + std::to_string(max_dimension));
  return d;
}

void term_flags::validate() const {
  if (!(carrier_x || carrier_z || sideband_x || sideband_z))
    throw invalid_argument_error("term_flags: at least one Hamiltonian term must be enabled");
}

sim_state basis_state(const hilbert_spec& spec, const std::vector<int>& qubits,
                      const std::vector<int>& fock) {
  if (static_cast<int>(qubits.size()) != spec.n_qubits || fock.size() != spec.modes.size())
    throw invalid_argument_error("basis_state: label lengths do not match the Hilbert spec");
  int qi = 0;
  for (int q : qubits) {
    if (q != 0 && q != 1) throw invalid_argument_error("basis_state: qubit labels are 0 (up) or 1 (down)");
    qi = qi * 2 + q;
  }
  int fi = 0;
  for (size_t m = 0; m < fock.size(); ++m) {
    if (fock[m] < 0 || fock[m] > spec.modes[m].n_max)
      throw invalid_argument_error("basis_state: Fock index out of range");
    fi = fi * (spec.modes[m].n_max + 1) + fock[m];
  }
  sim_state s;
  s.amplitudes = VectorXcd::Zero(spec.dimension());
  s.amplitudes(qi * spec.fock_dimension() + fi) = 1.0;
  return s;
}

evolve_system::evolve_system(const std::vector<evolve_drive>& drives, const term_flags& flags,
                             const hilbert_spec& spec, double omega0)
    : spec_(spec) {
  flags.validate();
  const int dim = spec.dimension();
  (void)dim;
  const int nq = spec.n_qubits;
  const int nm = static_cast<int>(spec.modes.size());

  // full-space qubit and mode operators
  const MatrixXcd id2 = MatrixXcd::Identity(2, 2);
  const MatrixXcd idf = MatrixXcd::Identity(spec.fock_dimension(), spec.fock_dimension());
  auto qubit_op = [&](const MatrixXcd& op, int n) {
    MatrixXcd acc = MatrixXcd::Identity(1, 1);
    for (int q = 0; q < nq; ++q) acc = kron(acc, q == n ? op : id2);
    return kron(acc, idf);
  };
  auto mode_op = [&](const MatrixXcd& op, int j) {
    MatrixXcd acc = MatrixXcd::Identity(1, 1);
    for (int m = 0; m < nm; ++m) {
      const MatrixXcd idm = MatrixXcd::Identity(spec.modes[m].n_max + 1, spec.modes[m].n_max + 1);
      acc = kron(acc, m == j ? op : idm);
    }
    return kron(MatrixXcd::Identity(1 << nq, 1 << nq), acc);
  };

  double cutoff = flags.rwa_cutoff;
  if (cutoff == 0) {
    cutoff = omega0 / 2;
    for (const auto& m : spec_.modes) cutoff = std::min(cutoff, m.omega / 2);
  }
  const double hbar = codata().hbar;

  auto push = [&](cd coeff, double freq, const MatrixXcd& op) {
    if (!flags.offresonant && std::abs(freq) > cutoff) return;
    terms_.push_back({coeff, freq, op, op.adjoint()});
  };

  for (const auto& d : drives) {
    if (!(d.tone.omega > 0))
      throw invalid_argument_error("evolve: tone frequency must be > 0");
    const double w = d.tone.omega;
    const cd em = std::exp(cd(0, -d.tone.phase));  // e^{-i phi}
    for (int n = 0; n < nq; ++n) {
      if (flags.carrier_x && d.rabi.omega_x != 0.0) {
        push(-hbar * d.rabi.omega_x * em, omega0 - w, qubit_op(sigma_plus(), n));
        if (flags.offresonant)  // pre-RWA counter-rotating partner
          push(-hbar * d.rabi.omega_x * std::conj(em), omega0 + w, qubit_op(sigma_plus(), n));
      }
      if (flags.carrier_z && d.rabi.omega_z != 0.0)
        push(-hbar * d.rabi.omega_z * em, -w, qubit_op(sigma_z(), n));
      for (int j = 0; j < nm; ++j) {
        const double wj = spec.modes[j].omega;
        if (flags.sideband_x &&
            d.rabi.omega_x_jn.rows() > j && d.rabi.omega_x_jn.cols() > n &&
            d.rabi.omega_x_jn(j, n) != 0.0) {
          const MatrixXcd sp_a = qubit_op(sigma_plus(), n) * mode_op(lowering(spec.modes[j].n_max), j);
          const MatrixXcd sp_ad =
              qubit_op(sigma_plus(), n) * mode_op(lowering(spec.modes[j].n_max).adjoint(), j);
          const cd c = -hbar * d.rabi.omega_x_jn(j, n) * em;
          push(c, omega0 - w - wj, sp_a);
          push(c, omega0 - w + wj, sp_ad);
          if (flags.offresonant) {
            const cd cc = -hbar * d.rabi.omega_x_jn(j, n) * std::conj(em);
            push(cc, omega0 + w - wj, sp_a);
            push(cc, omega0 + w + wj, sp_ad);
          }
        }
        if (flags.sideband_z &&
            d.rabi.omega_z_jn.rows() > j && d.rabi.omega_z_jn.cols() > n &&
            d.rabi.omega_z_jn(j, n) != 0.0) {
          const MatrixXcd sz_a = qubit_op(sigma_z(), n) * mode_op(lowering(spec.modes[j].n_max), j);
          const MatrixXcd sz_ad =
              qubit_op(sigma_z(), n) * mode_op(lowering(spec.modes[j].n_max).adjoint(), j);
          const cd c = -hbar * d.rabi.omega_z_jn(j, n) * em;
          push(c, -w - wj, sz_a);
          push(c, -w + wj, sz_ad);
        }
      }
    }
  }
}

MatrixXcd evolve_system::hamiltonian(double t) const {
  const int dim = spec_.dimension();
  MatrixXcd h = MatrixXcd::Zero(dim, dim);
  for (const auto& tm : terms_) {
    const cd phase = tm.coeff * std::exp(cd(0, tm.freq * t));
    h += phase * tm.op + std::conj(phase) * tm.op_dag;
  }
  return h;
}

void evolve_system::derivative(double t, const VectorXcd& psi, VectorXcd& out, bool adjoint,
                               double t_final) const {
  const double t_eval = adjoint ? t_final - t : t;
  out.setZero(psi.size());
  for (const auto& tm : terms_) {
    const cd phase = tm.coeff * std::exp(cd(0, tm.freq * t_eval));
    out.noalias() += phase * (tm.op * psi);
    out.noalias() += std::conj(phase) * (tm.op_dag * psi);
  }
  const cd factor = adjoint ? cd(0, 1.0 / codata().hbar) : cd(0, -1.0 / codata().hbar);
  out *= factor;
}

integrate_result integrate(const evolve_system& system, const sim_state& psi0, double t_final,
                           double tol, bool adjoint) {
  if (std::abs(psi0.norm() - 1.0) > 1e-9)
    throw invalid_argument_error("integrate: initial state must be normalized");
  if (!(t_final > 0)) throw invalid_argument_error("integrate: t_final must be > 0");

  // Dormand-Prince 5(4)
  static const double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static const double b4[7] = {5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  // conservative initial step from the Hamiltonian scale at t = 0; the
  // controller then adapts, with rejection guarding against aliasing
  const double hnorm = system.hamiltonian(0.0).norm() / codata().hbar;

  std::vector<Eigen::VectorXcd> k(7);
  Eigen::VectorXcd psi = psi0.amplitudes;
  double t = 0;
  double dt = std::min(t_final / 64.0, 0.1 / std::max(hnorm, 1.0 / t_final));
  const double dt_min = t_final * 1e-15;
  integrate_result res;
  Eigen::VectorXcd tmp, y5, err;
  long rejected = 0;
  while (t < t_final) {
    dt = std::min(dt, t_final - t);
    system.derivative(t, psi, k[0], adjoint, t_final);
    for (int s = 1; s < 7; ++s) {
      tmp = psi;
      for (int j = 0; j < s; ++j)
        if (a[s][j] != 0.0) tmp += dt * a[s][j] * k[j];
      system.derivative(t + c[s] * dt, tmp, k[s], adjoint, t_final);
    }
    y5 = psi;
    for (int j = 0; j < 6; ++j)
      if (a[6][j] != 0.0) y5 += dt * a[6][j] * k[j];
    err = -y5;
    err += psi;
    for (int j = 0; j < 7; ++j)
      if (b4[j] != 0.0) err += dt * b4[j] * k[j];
    const double scale = tol * std::max(1.0, psi.norm());
    const double e = err.norm() / scale;
    if (e <= 1.0) {
      t += dt;
      psi.swap(y5);
      ++res.steps;
    } else {
      ++rejected;
    }
    const double grow = 0.9 * std::pow(std::max(e, 1e-10), -0.2);
    dt *= std::clamp(grow, 0.2, 5.0);
    if (dt < dt_min)
      throw convergence_error("integrate: step underflow at t = " + std::to_string(t) +
                              " s (dt = " + std::to_string(dt) + ", rejected " +
                              std::to_string(rejected) + ")");
    if (res.steps + rejected > 100000000)
      throw convergence_error("integrate: step budget exhausted");
  }
  res.state.amplitudes = psi;
  res.state.time = t_final;
  res.norm_drift = std::abs(psi.norm() - 1.0);
  return res;
}

MatrixXcd propagator(const evolve_system& system, double t_final, double tol) {
  const int dim = system.spec().dimension();
  MatrixXcd u(dim, dim);
  for (int col = 0; col < dim; ++col) {
    sim_state s;
    s.amplitudes = VectorXcd::Zero(dim);
    s.amplitudes(col) = 1.0;
    u.col(col) = integrate(system, s, t_final, tol).state.amplitudes;
  }
  return u;
}

spin_process spin_propagator(const evolve_system& system, const std::vector<int>& fock,
                             double t_final, double tol) {
  const auto& spec = system.spec();
  const int nq = spec.n_qubits;
  const int ns = 1 << nq;
  int fi = 0;
  for (size_t m = 0; m < fock.size(); ++m) fi = fi * (spec.modes[m].n_max + 1) + fock[m];
  spin_process out;
  out.u = MatrixXcd::Zero(ns, ns);
  const int fd = spec.fock_dimension();
  for (int s = 0; s < ns; ++s) {
    sim_state psi0;
    psi0.amplitudes = VectorXcd::Zero(spec.dimension());
    psi0.amplitudes(s * fd + fi) = 1.0;
    const VectorXcd psi = integrate(system, psi0, t_final, tol).state.amplitudes;
    for (int sp = 0; sp < ns; ++sp) out.u(sp, s) = psi(sp * fd + fi);
  }
  out.closure_defect = 1.0 - out.u.squaredNorm() / ns;
  return out;
}

double state_fidelity(const VectorXcd& a, const VectorXcd& b) {
  if (a.size() != b.size()) throw invalid_argument_error("state_fidelity: dimension mismatch");
  return std::norm(a.dot(b));
}

double process_fidelity(const MatrixXcd& analytic, const MatrixXcd& numeric) {
  if (analytic.rows() != numeric.rows() || analytic.cols() != numeric.cols())
    throw invalid_argument_error("process_fidelity: dimension mismatch");
  const double d = static_cast<double>(analytic.rows());
  return std::norm((analytic.adjoint() * numeric).trace()) / (d * d);
}

std::vector<double> fock_independence_scan(const evolve_system& system,
                                           const Eigen::MatrixXcd& analytic_u, double t_final,
                                           const std::vector<int>& n_list, double tol) {
  const auto& spec = system.spec();
  if (spec.modes.size() != 1)
    throw invalid_argument_error("fock_independence_scan: exactly one mode expected");
  const int n_max = spec.modes[0].n_max;
  const int nq = spec.n_qubits;
  const int ns = 1 << nq;
  const int fd = spec.fock_dimension();
  std::vector<double> fidelities;
  for (int n0 : n_list) {
    if (n0 > n_max) throw invalid_argument_error("fock_independence_scan: n exceeds cutoff");
    MatrixXcd u = MatrixXcd::Zero(ns, ns);
    for (int s = 0; s < ns; ++s) {
      sim_state psi0;
      psi0.amplitudes = VectorXcd::Zero(spec.dimension());
      psi0.amplitudes(s * fd + n0) = 1.0;
      const VectorXcd psi = integrate(system, psi0, t_final, tol).state.amplitudes;
      double top = 0;
      for (int sp = 0; sp < ns; ++sp)
        top += std::norm(psi(sp * fd + n_max)) + std::norm(psi(sp * fd + n_max - 1));
      if (top > 1e-8)
        throw convergence_error("fock_independence_scan: population " + std::to_string(top) +
                                " at the top two Fock levels, cutoff too small");
      for (int sp = 0; sp < ns; ++sp) u(sp, s) = psi(sp * fd + n0);
    }
    fidelities.push_back(process_fidelity(analytic_u, u));
  }
  return fidelities;
}

double qubit_phase_difference(const Eigen::Matrix2cd& u) {
  return std::arg(u(1, 1)) - std::arg(u(0, 0));
}

}  // namespace iongate
