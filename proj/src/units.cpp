#include "iongate/units.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <utility>
#include <vector>

#include "iongate/error.hpp"

namespace iongate {

namespace {

struct suffix_entry {
  const char* suffix;
  unit_dimension dim;
  double factor;
};

// longest-match table; frequencies in Hz
const std::vector<suffix_entry>& table() {
  static const std::vector<suffix_entry> t = {
      {"uA", unit_dimension::current, 1e-6},
      {"mA", unit_dimension::current, 1e-3},
      {"A", unit_dimension::current, 1.0},
      {"uT", unit_dimension::field, 1e-6},
      {"mT", unit_dimension::field, 1e-3},
      {"T", unit_dimension::field, 1.0},
      {"nm", unit_dimension::length, 1e-9},
      {"um", unit_dimension::length, 1e-6},
      {"mm", unit_dimension::length, 1e-3},
      {"cm", unit_dimension::length, 1e-2},
      {"m", unit_dimension::length, 1.0},
      {"Hz", unit_dimension::frequency, 1.0},
      {"kHz", unit_dimension::frequency, 1e3},
      {"MHz", unit_dimension::frequency, 1e6},
      {"GHz", unit_dimension::frequency, 1e9},
      {"ns", unit_dimension::time, 1e-9},
      {"us", unit_dimension::time, 1e-6},
      {"ms", unit_dimension::time, 1e-3},
      {"s", unit_dimension::time, 1.0},
      {"uV", unit_dimension::voltage, 1e-6},
      {"mV", unit_dimension::voltage, 1e-3},
      {"V", unit_dimension::voltage, 1.0},
      {"mrad", unit_dimension::angle, 1e-3},
      {"rad", unit_dimension::angle, 1.0},
      {"deg", unit_dimension::angle, M_PI / 180.0},
  };
  return t;
}

}  // namespace

std::string unit_suffixes(unit_dimension d) {
  std::string out;
  for (const auto& e : table()) {
    if (e.dim != d) continue;
    if (!out.empty()) out += ", ";
    out += e.suffix;
  }
  if (out.empty()) out = "(none, dimensionless)";
  return out;
}

double parse_quantity(const std::string& text, unit_dimension expected) {
  size_t a = text.find_first_not_of(" \t");
  size_t b = text.find_last_not_of(" \t");
  if (a == std::string::npos) throw invalid_argument_error("empty quantity");
  const std::string s = text.substr(a, b - a + 1);

  const char* cs = s.c_str();
  char* end = nullptr;
  const double value = std::strtod(cs, &end);
  if (end == cs) throw invalid_argument_error("quantity '" + s + "': no number found");
  std::string suffix(end);
  size_t p = suffix.find_first_not_of(" \t");
  suffix = (p == std::string::npos) ? "" : suffix.substr(p);

  if (expected == unit_dimension::dimensionless) {
    if (!suffix.empty())
      throw invalid_argument_error("quantity '" + s + "': expected a bare number, got unit '" +
                                   suffix + "'");
    return value;
  }
  if (suffix.empty())
    throw invalid_argument_error("quantity '" + s + "': missing unit (accepted: " +
                                 unit_suffixes(expected) + ")");
  for (const auto& e : table()) {
    if (suffix == e.suffix) {
      if (e.dim != expected)
        throw invalid_argument_error("quantity '" + s + "': unit '" + suffix +
                                     "' has the wrong dimension (accepted: " +
                                     unit_suffixes(expected) + ")");
      return value * e.factor;
    }
  }
  throw invalid_argument_error("quantity '" + s + "': unknown unit '" + suffix +
                               "' (accepted: " + unit_suffixes(expected) + ")");
}

}  // namespace iongate
