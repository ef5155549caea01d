#pragma once

#include <stdexcept>
#include <string>

namespace iongate {

// Base for all toolkit errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad physical input (negative field, malformed species, ...).
struct invalid_argument_error : error {
  using error::error;
};

// Iterative procedure failed to converge; message carries the residual.
struct convergence_error : error {
  using error::error;
};

// Evaluation point coincides with a source (wire, plane, ...).
struct singularity_error : error {
  using error::error;
};

}  // namespace iongate
