#pragma once

#include <string>
#include <vector>

namespace iongate {

// The full reproduction suite: one named pass/fail check per headline number,
// shared between the CLI `reproduce` subcommand and the acceptance binary.
// Deterministic; runs in well under five minutes on one workstation core.

struct acceptance_check {
  std::string name;
  bool pass = false;
  std::string detail;  // measured value, target window, units
};

struct acceptance_suite {
  std::vector<acceptance_check> checks;
  bool all_pass() const;
};

acceptance_suite run_acceptance();

// Fixed-width pass/fail table, one line per check.
std::string format_acceptance(const acceptance_suite& suite);

}  // namespace iongate
