#include "iongate/gates.hpp"

#include <cmath>

#include "iongate/constants.hpp"
#include "iongate/error.hpp"

namespace iongate {

namespace {

using cd = std::complex<double>;

int axis_col(mode_axis a) {
  switch (a) {
    case mode_axis::x: return 0;
    case mode_axis::y: return 1;
    case mode_axis::z: return 2;
  }
  return 2;
}

// R sigma_z R^dag = sigma_phi, basis (|u>, |d>)
Eigen::Matrix2cd sigma_phi_basis_change(double phi) {
  Eigen::Matrix2cd r;
  const cd e = std::exp(cd(0, phi));
  r << 1, 1, e, -e;
  return r / std::sqrt(2.0);
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

// Shared closed-loop machinery behind Eqs. U_zz / U_phiphi: exponent
// (2 pi / delta^2) (sum_n Omega_n s_n)^2 on the four sigma_z product states.
gate_report closed_loop_gate(const Eigen::VectorXd& omega_n, double delta) {
  if (delta == 0.0) throw invalid_argument_error("gate: delta must be nonzero");
  if (omega_n.size() != 2)
    throw invalid_argument_error("gate: two-qubit propagators need exactly 2 ions");
  gate_report rep;
  rep.delta = delta;
  rep.tau = 2.0 * M_PI / std::abs(delta);
  const double signs[4][2] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};  // uu, ud, du, dd
  double s_extremal = 0.0;
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 4; ++k) {
    const double s = omega_n(0) * signs[k][0] + omega_n(1) * signs[k][1];
    if (std::abs(s) > std::abs(s_extremal)) s_extremal = s;
    rep.basis_phases[k] = 2.0 * M_PI / (delta * delta) * s * s;
    u(k, k) = std::exp(cd(0, rep.basis_phases[k]));
  }
  rep.propagator = u;
  const int nsamp = 256;
  rep.trajectory_t.resize(nsamp + 1);
  for (int i = 0; i <= nsamp; ++i) rep.trajectory_t[i] = rep.tau * i / nsamp;
  rep.trajectory = phase_space_trajectory(s_extremal, delta, rep.trajectory_t);
  rep.alpha_max = 2.0 * std::abs(s_extremal / delta);
  return rep;
}

}  // namespace

rabi_set rabi_frequencies(const field_sample& per_amp, double amps, const qubit_pair& pair,
                          const mode_decomposition& modes) {
  const auto& c = codata();
  const field_sample f = per_amp * amps;
  const int col = axis_col(modes.axis);
  const double mu_x = pair.mu_x_updown;
  const double mu_eff = pair.mu_eff();
  rabi_set r;
  r.zero_mu_x = (mu_x == 0.0);
  r.zero_mu_eff = (mu_eff == 0.0);
  r.omega_x = f.b.x() * mu_x / (2.0 * c.hbar);
  r.omega_z = f.b.z() * mu_eff / (2.0 * c.hbar);
  const double grad_x = f.jacobian(0, col);  // dBx/dq along the motion axis
  const double grad_z = f.jacobian(2, col);  // dBz/dq
  const int nmodes = static_cast<int>(modes.modes.size());
  const int nions = nmodes ? static_cast<int>(modes.modes[0].b.size()) : 0;
  r.omega_x_jn.resize(nmodes, nions);
  r.omega_z_jn.resize(nmodes, nions);
  for (int j = 0; j < nmodes; ++j) {
    const auto& m = modes.modes[j];
    for (int n = 0; n < nions; ++n) {
      const double lever = m.b(n) * m.q0 / (2.0 * c.hbar);
      r.omega_x_jn(j, n) = lever * grad_x * mu_x;
      r.omega_z_jn(j, n) = lever * grad_z * mu_eff;
    }
  }
  return r;
}

rabi_set rabi_frequencies(const field_sample& per_amp, double amps, const qubit_pair& pair,
                          const chain_mode& mode, mode_axis motion_axis) {
  mode_decomposition md;
  md.axis = motion_axis;
  md.modes = {mode};
  md.positions = Eigen::VectorXd::Zero(mode.b.size());
  return rabi_frequencies(per_amp, amps, pair, md);
}

Eigen::Matrix2cd carrier_rotation(double omega_x, double phase, double t) {
  Eigen::Matrix2cd sigma_phi;
  sigma_phi << 0, std::exp(cd(0, -phase)), std::exp(cd(0, phase)), 0;
  return std::cos(omega_x * t) * Eigen::Matrix2cd::Identity() +
         cd(0, std::sin(omega_x * t)) * sigma_phi;
}

gate_report sigma_zz_gate(const rabi_set& rabi, int mode_j, double delta) {
  gate_report rep = closed_loop_gate(rabi.omega_z_jn.row(mode_j), delta);
  rep.kind = gate_kind::zz;
  return rep;
}

gate_report sigma_phiphi_gate(const rabi_set& rabi, int mode_j, double delta, double phi_b,
                              double phi_r, double amplitude_ratio) {
  if (std::abs(amplitude_ratio - 1.0) > 1e-12)
    throw invalid_argument_error(
        "sigma_phiphi_gate: unequal tone amplitudes are not supported (ratio must be 1)");
  gate_report rep = closed_loop_gate(rabi.omega_x_jn.row(mode_j), delta);
  rep.kind = gate_kind::phiphi;
  const double phi_s = 0.5 * (phi_b + phi_r);
  const Eigen::Matrix4cd r2 = kron2(sigma_phi_basis_change(phi_s), sigma_phi_basis_change(phi_s));
  rep.propagator = r2 * rep.propagator * r2.adjoint();
  return rep;
}

std::vector<std::complex<double>> phase_space_trajectory(double omega, double delta,
                                                         const std::vector<double>& t_grid) {
  if (delta == 0.0) throw invalid_argument_error("phase_space_trajectory: delta must be nonzero");
  std::vector<cd> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(omega / delta * (1.0 - std::exp(cd(0, delta * t))));
  return out;
}

double solve_gate_current(double tau, const five_wire_design& geometry, const chain_mode& mode,
                          mode_axis motion_axis, const qubit_pair& pair, gate_kind kind) {
  if (!(tau > 0)) throw invalid_argument_error("solve_gate_current: tau must be > 0");
  if (mode.b.size() != 2 || std::abs(std::abs(mode.b(0)) - std::abs(mode.b(1))) > 1e-12)
    throw invalid_argument_error("solve_gate_current: need a balanced two-ion mode");
  const auto& c = codata();
  const double mu = (kind == gate_kind::zz) ? std::abs(pair.mu_eff()) : pair.mu_x_updown;
  const double omega_per_amp =
      std::abs(mode.b(0)) * mode.q0 * geometry.gradient_per_amp * mu / (2.0 * c.hbar);
  if (!(omega_per_amp > 0))
    throw invalid_argument_error("solve_gate_current: zero coupling, gate unattainable");
  const double delta = 2.0 * M_PI / tau;
  const double current = (delta / 4.0) / omega_per_amp;
  const double tau_check = 2.0 * M_PI / (4.0 * omega_per_amp * current);
  if (std::abs(tau_check - tau) > 1e-10 * tau)
    throw convergence_error("solve_gate_current: forward check failed");
  return current;
}

std::vector<drive_tone> gate_spec::tones() const {
  if (kind == gate_kind::zz) return {drive_tone::make(mode.omega - delta, phi_b)};
  return {drive_tone::make(pair.omega0 + mode.omega - delta, phi_b),
          drive_tone::make(pair.omega0 - mode.omega + delta, phi_r)};
}

error_budget residual_error_budget(const five_wire_design& geometry,
                                   const Eigen::Vector3d& displacement, const gate_spec& spec) {
  const auto& c = codata();
  error_budget out;
  const field_sample gate_field =
      field_of_layout(geometry.conductors(), geometry.gate_currents(spec.current_amps),
                      geometry.ion());
  out.residual_field = gate_field.jacobian * displacement;
  const double b_trans = std::abs(out.residual_field.x());
  const double b_long = out.residual_field.z();
  const double omega_x_res = b_trans * spec.pair.mu_x_updown / (2.0 * c.hbar);
  const double omega_z_res = b_long * spec.pair.mu_eff() / (2.0 * c.hbar);
  const double w0 = spec.pair.omega0;

  double phase2 = 0;  // second-order transverse, summed over tones
  double phase1 = 0;  // first-order longitudinal
  std::vector<error_budget::line> detail;
  const auto tone_list = spec.tones();
  for (size_t k = 0; k < tone_list.size(); ++k) {
    const double w = tone_list[k].omega;
    const double ph = tone_list[k].phase;
    const double p2 =
        2.0 * omega_x_res * omega_x_res * (1.0 / (w0 - w) + 1.0 / (w0 + w)) * spec.tau;
    phase2 += p2;
    detail.push_back({"  ac-Zeeman, tone " + std::to_string(k + 1), p2});
    double p1 = 0;
    if (w > 0)
      p1 = 2.0 * omega_z_res / w * (std::sin(w * spec.tau + ph) - std::sin(ph));
    phase1 += p1;
  }
  out.lines.push_back({"ac-Zeeman shift of omega0, residual transverse field (tone sum)", phase2});
  for (auto& d : detail) out.lines.push_back(d);
  out.lines.push_back({"first-order sigma_z phase, residual longitudinal field", phase1});
  out.worst_mechanism = std::max(std::abs(phase2), std::abs(phase1));
  out.summed = std::abs(phase2 + phase1);

  out.electric_equivalence_volts = electric_equivalence_potential(
      geometry.gradient_per_amp * spec.current_amps, spec.pair.mu_z_up,
      pickup_field(geometry.center, 1.0, geometry.ion()));
  out.anharmonic_suppression_factor = anharmonic_suppression(spec.mode.q0, geometry.d0);
  return out;
}

double electric_equivalence_potential(double gradient_t_per_m, double mu_z,
                                      const Eigen::Vector3d& pickup_per_volt) {
  const double e_per_volt = pickup_per_volt.norm();
  if (!(e_per_volt > 0))
    throw invalid_argument_error("electric_equivalence_potential: zero pickup field");
  return std::abs(mu_z * gradient_t_per_m) / (codata().elementary_charge * e_per_volt);
}

double anharmonic_suppression(double q0, double d0) {
  if (!(q0 > 0 && d0 > 0))
    throw invalid_argument_error("anharmonic_suppression: inputs must be positive");
  return (q0 / d0) * (q0 / d0);
}

}  // namespace iongate
