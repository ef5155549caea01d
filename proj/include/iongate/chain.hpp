#pragma once

#include <Eigen/Dense>
#include <vector>

namespace iongate {

// Equilibrium and normal modes of an equal-mass linear ion chain aligned
// along y, with harmonic confinement and Coulomb coupling. Frequencies are
// rad/s internally; Hz only at interfaces (CSV, reports).

enum class mode_axis { x, y, z };

struct chain_config {
  int n = 1;            // ion count
  double mass_kg = 0;
  double omega_y = 0;   // axial, rad/s
  double omega_x = 0;   // transverse, rad/s
  double omega_z = 0;   // transverse, rad/s

  void validate() const;
};

struct chain_mode {
  double omega = 0;      // rad/s
  Eigen::VectorXd b;     // amplitude vector, length N, unit norm
  double q0 = 0;         // ground-state extent sqrt(hbar/(2 m omega)), m
};

struct mode_decomposition {
  mode_axis axis = mode_axis::y;
  std::vector<chain_mode> modes;   // sorted by ascending omega
  Eigen::VectorXd positions;       // equilibrium positions along y, m
};

// Characteristic Coulomb length (e^2 / (4 pi eps0 m omega_y^2))^(1/3).
double chain_length_scale(const chain_config& cfg);

// Damped Newton on the dimensionless potential; gradient at the solution is
// below 1e-12 of the characteristic force.
Eigen::VectorXd equilibrium_positions(const chain_config& cfg);

mode_decomposition normal_modes(const chain_config& cfg, mode_axis axis);

double ground_state_extent(double mass_kg, double omega_j);

// Two-ion convenience modes used by the gate examples, with omega_j taken
// directly as the gate-mode frequency: rocking b = (1,-1)/sqrt(2),
// com b = (1,1)/sqrt(2).
chain_mode two_ion_rocking_mode(double mass_kg, double omega_j);
chain_mode two_ion_com_mode(double mass_kg, double omega_j);

}  // namespace iongate
