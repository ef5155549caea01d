#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "iongate/atomic.hpp"
#include "iongate/chain.hpp"
#include "iongate/evolve.hpp"
#include "iongate/fields.hpp"
#include "iongate/gates.hpp"
#include "iongate/species.hpp"

namespace iongate {

// Structured text run configuration. INI-style named sections, '#' or ';'
// comments, every dimensioned scalar carries a unit suffix. Unknown sections
// and keys are rejected. Section reference (all keys optional unless noted):
//
//   [species]  name = Be9+            (registry lookup; or the full inline set
//              registry = <path>       mass/nuclear_spin/hyperfine_a/g_j/g_i)
//   [qubit]    up = 2,0   down = 1,1
//              bias = auto | <field, e.g. 11.94 mT>
//   [geometry] five_wire_d0 = 30 um
//              conductor = wire x=<len> z=<len> current=<I>      (repeatable)
//              conductor = strip z1=<len> z2=<len> current=<I>
//              map_halfwidth = 40 um   map_points = 21
//   [chain]    n = 2   omega_x = 5 MHz   omega_y = 1 MHz   omega_z = 5 MHz
//   [gate]     kind = phiphi | zz
//              axis = x | z            mode = rocking | com
//              mode_frequency = 5 MHz
//              tau = 20 us | delta = <freq> | current = <I>   (exactly one)
//              phi_b = 0 rad   phi_r = 0 rad
//              carrier_current = 15 mA
//   [errors]   displacement_x/y/z = 200 nm
//   [evolve]   carrier_x/carrier_z/sideband_x/sideband_z/offresonant = on|off
//              n_max = 10   rwa_cutoff = <freq>   tolerance = 1e-10
//              t_final = <time>         (default: the gate time tau)

struct run_config {
  // species
  std::string species_name = "Be9+";
  std::optional<std::string> registry_path;
  std::optional<ion_species> inline_species;

  // qubit
  level_label up{1, 1};
  level_label down{2, 0};
  bool auto_clock = true;
  double bias_tesla = 0;  // used when auto_clock is false

  // geometry
  double d0 = 30e-6;
  std::vector<conductor> extra_conductors;
  std::vector<double> extra_currents;
  double map_halfwidth = 40e-6;
  int map_points = 21;

  // chain
  int chain_n = 2;
  double chain_omega_x = 2 * M_PI * 5e6;  // rad/s
  double chain_omega_y = 2 * M_PI * 1e6;
  double chain_omega_z = 2 * M_PI * 5e6;

  // gate
  gate_kind kind = gate_kind::phiphi;
  mode_axis motion_axis = mode_axis::z;
  std::string gate_mode = "rocking";  // rocking | com
  double mode_frequency = 2 * M_PI * 5e6;  // rad/s
  std::optional<double> tau;      // s
  std::optional<double> delta;    // rad/s
  std::optional<double> current;  // A
  double phi_b = 0, phi_r = 0;
  double carrier_current = 15e-3;  // A, pi-pulse example

  // errors
  Eigen::Vector3d displacement = Eigen::Vector3d(0, 0, 200e-9);

  // evolve
  term_flags flags{true, true, true, true, false, 0};
  int n_max = 10;
  double tolerance = 1e-10;
  std::optional<double> t_final;  // s

  static run_config parse_file(const std::string& path);
  static run_config parse_string(const std::string& text);

  // registry (defaults + optional file) lookup, or the inline constants
  ion_species resolve_species() const;
};

}  // namespace iongate
