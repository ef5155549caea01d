#include "iongate/species.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "iongate/error.hpp"

namespace iongate {

void ion_species::validate() const {
  if (name.empty()) throw invalid_argument_error("species: empty name");
  if (!(mass_kg > 0)) throw invalid_argument_error("species " + name + ": mass must be > 0");
  const double two_i = 2.0 * nuclear_spin;
  if (two_i < 0 || std::abs(two_i - std::round(two_i)) > 1e-9)
    throw invalid_argument_error("species " + name + ": nuclear spin must be half-integer >= 0");
  if (g_j == 0.0) throw invalid_argument_error("species " + name + ": g_j must be nonzero");
}

species_registry species_registry::defaults() {
  species_registry r;
  // 9Be+ ground state 2s 2S1/2.
  //   mass: 9.0121831 u minus one electron (AME2020 / CODATA m_e)
  //   A   : -625.008837048 MHz (Wineland & Itano, Phys. Rev. A 28, 2423)
  //   g_J : 2.00226206 (ibid.)
  //   g_I : nuclear moment -1.177432 mu_N (shielded), I = 3/2, expressed in
  //         Bohr magnetons for mu = -mu_B (g_J J + g_I I); sign works out
  //         positive in this convention.
  r.add(ion_species{"Be9+", 1.4964171e-26, 1.5, -625.008837048e6, 2.00226206, 4.274855e-4});
  return r;
}

void species_registry::add(const ion_species& s) {
  s.validate();
  for (auto& e : entries_) {
    if (e.name == s.name) {
      e = s;
      return;
    }
  }
  entries_.push_back(s);
}

const ion_species& species_registry::get(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e;
  throw invalid_argument_error("species registry: unknown species '" + name + "'");
}

std::vector<std::string> species_registry::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

void species_registry::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_argument_error("species registry: cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    ion_species s;
    if (!(ss >> s.name)) continue;  // blank line
    if (!(ss >> s.mass_kg >> s.nuclear_spin >> s.hyperfine_a_hz >> s.g_j >> s.g_i))
      throw invalid_argument_error(path + ":" + std::to_string(lineno) +
                                   ": expected 6 columns (name mass_kg I A_Hz gJ gI)");
    add(s);
  }
}

}  // namespace iongate
