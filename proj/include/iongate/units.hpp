#pragma once

#include <string>

namespace iongate {

// Unit-suffixed scalar parsing for config files and CLI flags. Every
// dimensioned value must carry a unit; "15 mA", "30um", "2*pi*5 MHz" style
// multipliers are not supported, plain "<number> <unit>" only. Frequencies
// are returned in Hz (cycles), not rad/s.

enum class unit_dimension {
  current,      // A
  field,        // T
  length,       // m
  frequency,    // Hz
  time,         // s
  voltage,      // V
  angle,        // rad
  dimensionless
};

// Parses "<number><space?><suffix>" and returns the SI value. Throws
// invalid_argument_error on missing/unknown/mismatched units.
double parse_quantity(const std::string& text, unit_dimension expected);

// Accepted suffixes for error messages.
std::string unit_suffixes(unit_dimension d);

}  // namespace iongate
