#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "iongate/fields.hpp"
#include "iongate/gates.hpp"

namespace iongate {

// Brute-force integration of the interaction-picture Hamiltonian on a
// truncated qubit (x) Fock space. No frame transformation beyond the
// interaction picture: every term carries its explicit e^{+-i(...)t} phase,
// so the term flags map one-to-one onto the bracketed Hamiltonian terms.
//
// Basis ordering: qubits major, Fock minor;
//   index = ((q_1 * 2 + q_2) * ... ) * prod(n_max+1) + fock index,
// with qubit bit 0 = |u> (so single-qubit index 0 is |u>, 1 is |d>).

struct hilbert_spec {
  int n_qubits = 1;
  struct mode_spec {
    double omega = 0;  // rad/s
    int n_max = 4;     // highest Fock state kept (>= 4)
  };
  std::vector<mode_spec> modes;
  int max_dimension = 1 << 16;

  int dimension() const;  // validates and returns 2^N * prod(n_max+1)
  int fock_dimension() const;
};

struct term_flags {
  bool carrier_x = false;
  bool carrier_z = false;
  bool sideband_x = false;
  bool sideband_z = false;
  // true: keep all phase factors and add the pre-RWA counter-rotating
  // partners of the carrier_x coupling. false: drop every term whose total
  // phase frequency exceeds rwa_cutoff.
  bool offresonant = false;
  double rwa_cutoff = 0;  // rad/s; 0 = auto (half the slowest mode frequency)

  void validate() const;  // at least one term enabled
};

// One oscillating drive: a tone plus the Rabi set its field produces.
struct evolve_drive {
  drive_tone tone;
  rabi_set rabi;
};

struct sim_state {
  Eigen::VectorXcd amplitudes;
  double time = 0;

  double norm() const { return amplitudes.norm(); }
};

sim_state basis_state(const hilbert_spec& spec, const std::vector<int>& qubits,
                      const std::vector<int>& fock);

// Precompiled Hamiltonian: H(t) = sum_k c_k e^{i nu_k t} M_k + h.c.
class evolve_system {
 public:
  evolve_system(const std::vector<evolve_drive>& drives, const term_flags& flags,
                const hilbert_spec& spec, double omega0);

  Eigen::MatrixXcd hamiltonian(double t) const;  // J units, Hermitian
  const hilbert_spec& spec() const { return spec_; }
  int n_terms() const { return static_cast<int>(terms_.size()); }

  // d psi / dt = -(i/hbar) H(t) psi  (or the adjoint-propagator flow)
  void derivative(double t, const Eigen::VectorXcd& psi, Eigen::VectorXcd& out,
                  bool adjoint, double t_final) const;

 private:
  struct term {
    std::complex<double> coeff;  // J
    double freq = 0;             // rad/s
    Eigen::MatrixXcd op, op_dag;
  };
  std::vector<term> terms_;
  hilbert_spec spec_;
};

struct integrate_result {
  sim_state state;
  double norm_drift = 0;  // | ||psi|| - 1 |
  long steps = 0;
};

// Adaptive Dormand-Prince 5(4). Deterministic for fixed inputs and tol.
// adjoint = true integrates the inverse propagator (time-mirrored, negated
// Hamiltonian), so evolve(tau) then adjoint-evolve(tau) returns psi0.
integrate_result integrate(const evolve_system& system, const sim_state& psi0, double t_final,
                           double tol = 1e-10, bool adjoint = false);

// Propagator by integrating every basis column.
Eigen::MatrixXcd propagator(const evolve_system& system, double t_final, double tol = 1e-10);

// Spin-only process extraction: columns are evolved from |s> (x) |fock>, rows
// projected back on the same Fock state at t_final.
struct spin_process {
  Eigen::MatrixXcd u;      // 2^N x 2^N, approximately unitary if the loop closed
  double closure_defect = 0;  // 1 - mean column norm^2 (motional entanglement)
};

spin_process spin_propagator(const evolve_system& system, const std::vector<int>& fock,
                             double t_final, double tol = 1e-10);

// |<a|b>|^2 for states, |tr(Ua^dag Un)|^2 / d^2 for processes.
double state_fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);
double process_fidelity(const Eigen::MatrixXcd& analytic, const Eigen::MatrixXcd& numeric);

// Gate fidelity per initial Fock state of the gate mode. Throws
// convergence_error if population reaches the top two Fock levels (> 1e-8).
std::vector<double> fock_independence_scan(const evolve_system& system,
                                           const Eigen::MatrixXcd& analytic_u, double t_final,
                                           const std::vector<int>& n_list, double tol = 1e-10);

// Differential qubit phase arg<d|U|d> - arg<u|U|u> of a single-qubit
// propagator; equals the accumulated (E_u - E_d) shift integral / hbar.
double qubit_phase_difference(const Eigen::Matrix2cd& u);

}  // namespace iongate
