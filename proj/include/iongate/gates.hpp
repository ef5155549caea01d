#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "iongate/atomic.hpp"
#include "iongate/chain.hpp"
#include "iongate/fields.hpp"

namespace iongate {

// Rabi frequencies, analytic gate propagators and the error budget.
//
// Conventions (printed in every report header):
//   * Omega_x = B_x |<down| mu_x |up>| / (2 hbar); a resonant carrier pi pulse
//     takes t_pi = pi / (2 Omega_x).
//   * The effective sigma_z coupling uses mu_eff = (mu_z_up - mu_z_down)/2;
//     the symmetric-moment simplification is never assumed, both raw moments
//     are always reported.
//   * Single-loop gates only: tau = 2 pi / delta with delta = 4 Omega_jn.
//   * Trajectory convention: alpha(0) = 0, counterclockwise for delta > 0.
// Two-qubit basis order: |uu>, |ud>, |du>, |dd> with sigma_z |u> = +|u>.

struct rabi_set {
  double omega_x = 0;  // rad/s
  double omega_z = 0;  // rad/s
  // per (mode j, ion n), signed via b_{j,n}
  Eigen::MatrixXd omega_x_jn;
  Eigen::MatrixXd omega_z_jn;
  bool zero_mu_x = false;    // flagged, not an error
  bool zero_mu_eff = false;
};

// Rabi frequencies at drive amplitude `amps`, for a field pattern sampled at
// the ion equilibrium position (`per_amp` holds field and jacobian per
// ampere). The gradient entering the sideband terms is taken along the
// motional axis of `modes`.
rabi_set rabi_frequencies(const field_sample& per_amp, double amps, const qubit_pair& pair,
                          const mode_decomposition& modes);

// Same, for a single explicit mode (the two-ion gate configurations).
rabi_set rabi_frequencies(const field_sample& per_amp, double amps, const qubit_pair& pair,
                          const chain_mode& mode, mode_axis motion_axis);

// Resonant carrier rotation by angle 2 Omega t about (cos phi, sin phi, 0),
// basis (|u>, |d>): U = cos(Omega t) 1 + i sin(Omega t) sigma_phi.
Eigen::Matrix2cd carrier_rotation(double omega_x, double phase, double t);

enum class gate_kind { zz, phiphi };

struct error_budget {
  Eigen::Vector3d residual_field = Eigen::Vector3d::Zero();  // T, amplitude at displaced ion
  struct line {
    std::string label;
    double phase_rad = 0;  // signed
  };
  std::vector<line> lines;        // per mechanism (and per-tone detail lines)
  double worst_mechanism = 0;     // max |phase| over mechanisms
  double summed = 0;              // |sum of mechanism phases|
  double electric_equivalence_volts = 0;
  double anharmonic_suppression_factor = 0;
};

struct gate_report {
  gate_kind kind = gate_kind::zz;
  double delta = 0;  // rad/s
  double tau = 0;    // s
  Eigen::Matrix4cd propagator = Eigen::Matrix4cd::Identity();
  std::array<double, 4> basis_phases{};  // arg of the diagonal action, |uu>,|ud>,|du>,|dd>
  std::vector<double> trajectory_t;
  std::vector<std::complex<double>> trajectory;  // alpha_j(t), extremal spin branch
  double alpha_max = 0;
  std::optional<double> required_current;  // A, filled by the drive solvers
};

// Eq-of-motion propagators at loop closure tau = 2 pi / delta.
gate_report sigma_zz_gate(const rabi_set& rabi, int mode_j, double delta);
gate_report sigma_phiphi_gate(const rabi_set& rabi, int mode_j, double delta, double phi_b,
                              double phi_r, double amplitude_ratio = 1.0);

// alpha(t) = (Omega/delta)(1 - e^{i delta t}).
std::vector<std::complex<double>> phase_space_trajectory(double omega, double delta,
                                                         const std::vector<double>& t_grid);

// Drive current for a single-loop gate of duration tau (delta = 4 Omega_jn)
// on the given mode of the five-wire geometry. Forward recomputation of tau
// from the result matches to 1e-10 relative.
double solve_gate_current(double tau, const five_wire_design& geometry, const chain_mode& mode,
                          mode_axis motion_axis, const qubit_pair& pair, gate_kind kind);

// Full gate configuration, as assembled by the CLI / acceptance suite.
struct gate_spec {
  gate_kind kind = gate_kind::zz;
  chain_mode mode;
  mode_axis motion_axis = mode_axis::z;
  double delta = 0;        // rad/s
  double tau = 0;          // s, = 2 pi / delta
  double phi_b = 0, phi_r = 0;
  double current_amps = 0;
  qubit_pair pair;
  double phi_s() const { return 0.5 * (phi_b + phi_r); }
  // drive tone frequencies for this configuration
  std::vector<drive_tone> tones() const;
};

// Residual-field error budget for an ion displaced from the field null.
// Mechanisms, per the two-level model the numeric oracle integrates:
//   * second-order (ac-Zeeman) shifts of the qubit transition from the
//     residual transverse field, summed over tones with signed detunings
//     1/(omega0 - omega) + 1/(omega0 + omega); blue and red contributions
//     partially cancel;
//   * first-order sigma_z phase from the residual longitudinal field.
// The reported phase is the differential (qubit) phase over the gate time.
error_budget residual_error_budget(const five_wire_design& geometry,
                                   const Eigen::Vector3d& displacement, const gate_spec& spec);

// Electrode potential whose electric force on the ion equals the
// state-dependent magnetic force |mu_z * gradient|.
double electric_equivalence_potential(double gradient_t_per_m, double mu_z,
                                      const Eigen::Vector3d& pickup_per_volt);

// (q0/d0)^2: suppression of higher-order Rabi-rate terms.
double anharmonic_suppression(double q0, double d0);

}  // namespace iongate
