#pragma once

#include <string>
#include <vector>

namespace iongate {

// Atomic inputs for a J=1/2 ion. Hyperfine constant A and the g factors are
// registry data with literature citations (see data/species.txt); they are
// signed. g_i is in the Bohr-magneton convention used by the magnetic moment
// operator mu = -mu_B (g_j J + g_i I).
struct ion_species {
  std::string name;
  double mass_kg = 0.0;
  double nuclear_spin = 0.0;    // I, half-integer
  double hyperfine_a_hz = 0.0;  // A, signed
  double g_j = 0.0;
  double g_i = 0.0;  // signed, Bohr-magneton convention

  void validate() const;  // throws invalid_argument_error
};

// Immutable at steady state: built once from defaults (plus optional file
// overrides) and then only read. Safe for concurrent lookups.
class species_registry {
 public:
  // Built-in entries (at least Be9+).
  static species_registry defaults();

  // Parse a registry file. Whitespace-separated columns:
  //   name mass_kg nuclear_spin hyperfine_a_hz g_j g_i
  // '#' starts a comment. Entries replace same-name defaults.
  void load_file(const std::string& path);

  void add(const ion_species& s);  // replaces on name collision
  const ion_species& get(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::vector<ion_species> entries_;
};

}  // namespace iongate
