#include "iongate/constants.hpp"

namespace iongate {

const physical_constants& codata() {
  static const physical_constants c{
      1.054571817e-34,   // hbar
      6.62607015e-34,    // h
      1.25663706212e-6,  // mu0
      9.2740100783e-24,  // mu_b
      1.602176634e-19,   // elementary charge
      8.8541878128e-12,  // epsilon0
  };
  return c;
}

}  // namespace iongate
