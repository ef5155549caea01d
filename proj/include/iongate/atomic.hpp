#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "iongate/species.hpp"

namespace iongate {

// Hyperfine + Zeeman structure of a J=1/2 ion.
//
// Conventions (single source of truth for all moment signs):
//   * magnetic moment operator  mu = -mu_B (g_J J + g_I I), g_I signed in
//     Bohr-magneton units;
//   * Hamiltonian  H/h = A I.J + (mu_B B / h)(g_J Jz + g_I Iz), energies in Hz
//     relative to the hyperfine centroid; conversion to rad/s happens only at
//     interfaces;
//   * product basis |mJ, mI> ordered mJ descending (outer), mI descending
//     (inner), so index = (1/2 - mJ)*(2I+1) + (I - mI).
// All functions here are pure; safe for concurrent use.

// Adiabatic (F, mF) label, tracked continuously from B = 0.
struct level_label {
  double f = 0;
  double mf = 0;
  bool operator==(const level_label&) const = default;
};

struct zeeman_level {
  level_label label;
  double energy_hz = 0;         // relative to hyperfine centroid
  Eigen::VectorXcd eigenvector; // over the |mJ, mI> product basis, unit norm
};

enum class dipole_axis { x, z };

// A I.J + Zeeman, Hz units, dimension 2(2I+1), block-diagonal in mF.
Eigen::MatrixXd hyperfine_hamiltonian(const ion_species& species, double b_tesla);

// All 2(2I+1) levels with adiabatic labels tracked from B = 0 by eigenvector
// overlap continuation (steps <= 0.1 mT). Sorted by (F, mF).
std::vector<zeeman_level> breit_rabi_levels(const ion_species& species, double b_tesla);

const zeeman_level& find_level(const std::vector<zeeman_level>& levels, const level_label& label);

// |E_a - E_b| * 2pi in rad/s.
double transition_frequency(const ion_species& species, const level_label& a,
                            const level_label& b, double b_tesla);

// <a| mu_axis |b> in J/T at the given field.
std::complex<double> dipole_matrix_element(const ion_species& species, const level_label& a,
                                           const level_label& b, dipole_axis axis,
                                           double b_tesla);

struct clock_point {
  double b_tesla = 0;            // field where d(omega0)/dB vanishes
  double second_derivative = 0;  // d^2(omega0)/dB^2 there, rad/s/T^2
};

// Stationary point of the a<->b transition frequency inside [b_lo, b_hi].
// Requires a sign change of the finite-difference derivative in the bracket.
clock_point field_independent_point(const ion_species& species, const level_label& a,
                                    const level_label& b, double b_lo, double b_hi);

// Qubit working point: levels, frequency and moments at a fixed bias field.
// Moments are recomputed from the eigenvectors at B0, never assumed symmetric;
// mu_eff = (mu_z_up - mu_z_down)/2 is what enters the sigma_z coupling.
struct qubit_pair {
  ion_species species;
  zeeman_level up, down;
  double b0_tesla = 0;
  double omega0 = 0;       // rad/s, 2pi (E_up - E_down), must be > 0
  double mu_z_up = 0;      // J/T, signed
  double mu_z_down = 0;    // J/T, signed
  double mu_x_updown = 0;  // J/T, |<down| mu_x |up>|
  double mu_eff() const { return 0.5 * (mu_z_up - mu_z_down); }
};

qubit_pair make_qubit_pair(const ion_species& species, const level_label& up,
                           const level_label& down, double b_tesla);

}  // namespace iongate
