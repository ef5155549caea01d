#pragma once

namespace iongate {

// CODATA 2018. All code pulls constants from this one registry.
struct physical_constants {
  double hbar;               // J s
  double h;                  // J s
  double mu0;                // T m / A
  double mu_b;               // J / T (Bohr magneton)
  double elementary_charge;  // C
  double epsilon0;           // F / m
};

const physical_constants& codata();

}  // namespace iongate
