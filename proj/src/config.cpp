#include "iongate/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "iongate/error.hpp"
#include "iongate/units.hpp"

namespace iongate {

namespace {

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw invalid_argument_error("config: key '" + key + "': expected on/off, got '" + v + "'");
}

level_label parse_label(const std::string& v, const std::string& key) {
  const size_t comma = v.find(',');
  if (comma == std::string::npos)
    throw invalid_argument_error("config: key '" + key + "': expected 'F,mF', got '" + v + "'");
  try {
    return {std::stod(trim(v.substr(0, comma))), std::stod(trim(v.substr(comma + 1)))};
  } catch (const std::exception&) {
    throw invalid_argument_error("config: key '" + key + "': expected 'F,mF', got '" + v + "'");
  }
}

// "wire x=0 um z=30 um current=1 A" style sub-key lists
std::map<std::string, std::string> parse_subkeys(std::istringstream& in) {
  std::map<std::string, std::string> out;
  std::string tok;
  std::string pending_key;
  while (in >> tok) {
    const size_t eq = tok.find('=');
    if (eq != std::string::npos) {
      pending_key = tok.substr(0, eq);
      out[pending_key] = tok.substr(eq + 1);
    } else if (!pending_key.empty()) {
      out[pending_key] += " " + tok;  // unit token after the number
    } else {
      throw invalid_argument_error("config: stray token '" + tok + "' in conductor line");
    }
  }
  return out;
}

conductor parse_conductor(const std::string& v, double& current) {
  std::istringstream in(v);
  std::string kind;
  in >> kind;
  auto kv = parse_subkeys(in);
  auto take = [&](const char* key, unit_dimension dim) {
    auto it = kv.find(key);
    if (it == kv.end())
      throw invalid_argument_error("config: conductor '" + v + "': missing '" +
                                   std::string(key) + "='");
    const double x = parse_quantity(it->second, dim);
    kv.erase(it);
    return x;
  };
  conductor c;
  if (kind == "wire") {
    const double x = take("x", unit_dimension::length);
    const double z = take("z", unit_dimension::length);
    current = take("current", unit_dimension::current);
    c = conductor::wire(x, z);
  } else if (kind == "strip") {
    const double z1 = take("z1", unit_dimension::length);
    const double z2 = take("z2", unit_dimension::length);
    current = take("current", unit_dimension::current);
    c = conductor::strip(z1, z2);
  } else {
    throw invalid_argument_error("config: conductor kind must be wire or strip, got '" + kind +
                                 "'");
  }
  if (!kv.empty())
    throw invalid_argument_error("config: conductor '" + v + "': unknown sub-key '" +
                                 kv.begin()->first + "'");
  return c;
}

}  // namespace

run_config run_config::parse_string(const std::string& text) {
  run_config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  bool inline_any = false;
  ion_species inl;

  // exactly-one bookkeeping for tau/delta/current
  std::vector<std::string> timing_keys;

  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string at = " (line " + std::to_string(lineno) + ")";
    if (line.front() == '[') {
      if (line.back() != ']')
        throw invalid_argument_error("config: malformed section header '" + line + "'" + at);
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"species", "qubit", "geometry", "chain",
                                    "gate",    "errors", "evolve"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) throw invalid_argument_error("config: unknown section [" + section + "]" + at);
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw invalid_argument_error("config: expected 'key = value', got '" + line + "'" + at);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (section.empty())
      throw invalid_argument_error("config: key '" + key + "' outside any section" + at);

    try {
      if (section == "species") {
        if (key == "name") cfg.species_name = val;
        else if (key == "registry") cfg.registry_path = val;
        else if (key == "mass") { inl.mass_kg = std::stod(val); inline_any = true; }
        else if (key == "nuclear_spin") { inl.nuclear_spin = std::stod(val); inline_any = true; }
        else if (key == "hyperfine_a") {
          inl.hyperfine_a_hz = parse_quantity(val, unit_dimension::frequency);
          inline_any = true;
        }
        else if (key == "g_j") { inl.g_j = std::stod(val); inline_any = true; }
        else if (key == "g_i") { inl.g_i = std::stod(val); inline_any = true; }
        else throw invalid_argument_error("config: unknown key '" + key + "' in [species]");
      } else if (section == "qubit") {
        if (key == "up") cfg.up = parse_label(val, key);
        else if (key == "down") cfg.down = parse_label(val, key);
        else if (key == "bias") {
          if (val == "auto") cfg.auto_clock = true;
          else {
            cfg.auto_clock = false;
            cfg.bias_tesla = parse_quantity(val, unit_dimension::field);
          }
        }
        else throw invalid_argument_error("config: unknown key '" + key + "' in [qubit]");
      } else if (section == "geometry") {
        if (key == "five_wire_d0") cfg.d0 = parse_quantity(val, unit_dimension::length);
        else if (key == "conductor") {
          double amp = 0;
          cfg.extra_conductors.push_back(parse_conductor(val, amp));
          cfg.extra_currents.push_back(amp);
        }
        else if (key == "map_halfwidth")
          cfg.map_halfwidth = parse_quantity(val, unit_dimension::length);
        else if (key == "map_points") cfg.map_points = std::stoi(val);
        else throw invalid_argument_error("config: unknown key '" + key + "' in [geometry]");
      } else if (section == "chain") {
        if (key == "n") cfg.chain_n = std::stoi(val);
        else if (key == "omega_x")
          cfg.chain_omega_x = 2 * M_PI * parse_quantity(val, unit_dimension::frequency);
        else if (key == "omega_y")
          cfg.chain_omega_y = 2 * M_PI * parse_quantity(val, unit_dimension::frequency);
        else if (key == "omega_z")
          cfg.chain_omega_z = 2 * M_PI * parse_quantity(val, unit_dimension::frequency);
        else throw invalid_argument_error("config: unknown key '" + key + "' in [chain]");
      } else if (section == "gate") {
        if (key == "kind") {
          if (val == "zz") cfg.kind = gate_kind::zz;
          else if (val == "phiphi") cfg.kind = gate_kind::phiphi;
          else throw invalid_argument_error("config: gate kind must be zz or phiphi, got '" +
                                            val + "'");
        }
        else if (key == "axis") {
          if (val == "x") cfg.motion_axis = mode_axis::x;
          else if (val == "z") cfg.motion_axis = mode_axis::z;
          else throw invalid_argument_error("config: gate axis must be x or z, got '" + val + "'");
        }
        else if (key == "mode") {
          if (val != "rocking" && val != "com")
            throw invalid_argument_error("config: gate mode must be rocking or com, got '" + val +
                                         "'");
          cfg.gate_mode = val;
        }
        else if (key == "mode_frequency")
          cfg.mode_frequency = 2 * M_PI * parse_quantity(val, unit_dimension::frequency);
        else if (key == "tau") {
          cfg.tau = parse_quantity(val, unit_dimension::time);
          timing_keys.push_back("tau");
        }
        else if (key == "delta") {
          cfg.delta = 2 * M_PI * parse_quantity(val, unit_dimension::frequency);
          timing_keys.push_back("delta");
        }
        else if (key == "current") {
          cfg.current = parse_quantity(val, unit_dimension::current);
          timing_keys.push_back("current");
        }
        else if (key == "phi_b") cfg.phi_b = parse_quantity(val, unit_dimension::angle);
        else if (key == "phi_r") cfg.phi_r = parse_quantity(val, unit_dimension::angle);
        else if (key == "carrier_current")
          cfg.carrier_current = parse_quantity(val, unit_dimension::current);
        else throw invalid_argument_error("config: unknown key '" + key + "' in [gate]");
      } else if (section == "errors") {
        if (key == "displacement_x")
          cfg.displacement.x() = parse_quantity(val, unit_dimension::length);
        else if (key == "displacement_y")
          cfg.displacement.y() = parse_quantity(val, unit_dimension::length);
        else if (key == "displacement_z")
          cfg.displacement.z() = parse_quantity(val, unit_dimension::length);
        else throw invalid_argument_error("config: unknown key '" + key + "' in [errors]");
      } else if (section == "evolve") {
        if (key == "carrier_x") cfg.flags.carrier_x = parse_bool(val, key);
        else if (key == "carrier_z") cfg.flags.carrier_z = parse_bool(val, key);
        else if (key == "sideband_x") cfg.flags.sideband_x = parse_bool(val, key);
        else if (key == "sideband_z") cfg.flags.sideband_z = parse_bool(val, key);
        else if (key == "offresonant") cfg.flags.offresonant = parse_bool(val, key);
        else if (key == "rwa_cutoff")
          cfg.flags.rwa_cutoff = 2 * M_PI * parse_quantity(val, unit_dimension::frequency);
        else if (key == "n_max") cfg.n_max = std::stoi(val);
        else if (key == "tolerance") cfg.tolerance = std::stod(val);
        else if (key == "t_final") cfg.t_final = parse_quantity(val, unit_dimension::time);
        else throw invalid_argument_error("config: unknown key '" + key + "' in [evolve]");
      }
    } catch (const error&) {
      throw;
    } catch (const std::exception& ex) {
      throw invalid_argument_error("config: key '" + key + "': " + ex.what() + at);
    }
  }

  if (timing_keys.size() != 1 && !timing_keys.empty()) {
    std::string got;
    for (const auto& k : timing_keys) got += (got.empty() ? "" : " and ") + k;
    throw invalid_argument_error(
        "config: [gate] needs exactly one of tau, delta, current; got " + got);
  }
  if (timing_keys.empty() && !cfg.tau && !cfg.delta && !cfg.current) cfg.tau = 20e-6;

  if (inline_any) {
    inl.name = cfg.species_name;
    inl.validate();
    cfg.inline_species = inl;
  }
  return cfg;
}

run_config run_config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_argument_error("config: cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

ion_species run_config::resolve_species() const {
  if (inline_species) return *inline_species;
  species_registry reg = species_registry::defaults();
  if (registry_path) reg.load_file(*registry_path);
  return reg.get(species_name);
}

}  // namespace iongate
