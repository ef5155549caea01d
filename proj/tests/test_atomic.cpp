#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "iongate/atomic.hpp"
#include "iongate/constants.hpp"
#include "iongate/error.hpp"
#include "iongate/species.hpp"

using namespace iongate;

namespace {

ion_species be() { return species_registry::defaults().get("Be9+"); }

// Independent closed-form oracle: for J = 1/2 the Hamiltonian is block
// diagonal in mF with blocks of size <= 2, so every eigenvalue follows from
// the quadratic formula. Built here from scratch (no shared code with the
// library's generic spin-matrix construction).
std::vector<double> block_eigenvalues(const ion_species& s, double b) {
  const double a = s.hyperfine_a_hz;
  const double i_spin = s.nuclear_spin;
  const double x = codata().mu_b * b / codata().h;
  std::vector<double> out;
  // stretched states (single-entry blocks), mJ = +-1/2, mI = +-I
  out.push_back(a * 0.5 * i_spin + x * (0.5 * s.g_j + i_spin * s.g_i));
  out.push_back(a * 0.5 * i_spin - x * (0.5 * s.g_j + i_spin * s.g_i));
  // 2x2 blocks, mF = m: states (mJ=+1/2, mI=m-1/2) and (mJ=-1/2, mI=m+1/2)
  for (double m = -(i_spin - 0.5); m <= i_spin - 0.5 + 1e-9; m += 1.0) {
    const double d1 = a * 0.5 * (m - 0.5) + x * (0.5 * s.g_j + (m - 0.5) * s.g_i);
    const double d2 = -a * 0.5 * (m + 0.5) + x * (-0.5 * s.g_j + (m + 0.5) * s.g_i);
    const double mi2 = m + 0.5;
    const double off = 0.5 * a * std::sqrt(i_spin * (i_spin + 1) - mi2 * (mi2 - 1));
    const double mean = 0.5 * (d1 + d2);
    const double disc = std::sqrt(0.25 * (d1 - d2) * (d1 - d2) + off * off);
    out.push_back(mean + disc);
    out.push_back(mean - disc);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("levels match the closed-form per-block oracle") {
  const ion_species s = be();
  for (double b : {0.0, 1e-4, 5e-3, 11.94e-3, 20e-3}) {
    const std::vector<double> oracle = block_eigenvalues(s, b);
    std::vector<double> got;
    for (const auto& lv : breit_rabi_levels(s, b)) got.push_back(lv.energy_hz);
    std::sort(got.begin(), got.end());
    REQUIRE(got.size() == oracle.size());
    for (size_t k = 0; k < got.size(); ++k)
      CHECK(std::abs(got[k] - oracle[k]) < 1e-10 * std::abs(s.hyperfine_a_hz));
  }
}

TEST_CASE("zero-field structure: interval rule and trace") {
  const ion_species s = be();
  const auto levels = breit_rabi_levels(s, 0.0);
  REQUIRE(levels.size() == 8);
  // F = 2 is fivefold, F = 1 threefold, splitting 2A (interval rule, I = 3/2)
  double e2 = 0, e1 = 0;
  int n2 = 0, n1 = 0;
  double sum = 0;
  for (const auto& lv : levels) {
    sum += lv.energy_hz;
    if (lv.label.f == 2) { e2 = lv.energy_hz; ++n2; }
    else { e1 = lv.energy_hz; ++n1; }
  }
  CHECK(n2 == 5);
  CHECK(n1 == 3);
  CHECK(e1 - e2 == doctest::Approx(-2.0 * s.hyperfine_a_hz).epsilon(1e-12));
  // traceless Hamiltonian: energies sum to zero at any field
  CHECK(std::abs(sum) < 1e-9 * std::abs(s.hyperfine_a_hz));
  double sum_b = 0;
  for (const auto& lv : breit_rabi_levels(s, 15e-3)) sum_b += lv.energy_hz;
  CHECK(std::abs(sum_b) < 1e-9 * std::abs(s.hyperfine_a_hz));
}

TEST_CASE("stretched states are exactly linear in B") {
  const ion_species s = be();
  const double slope_hz_per_t = -codata().mu_b / codata().h * (0.5 * s.g_j + 1.5 * s.g_i);
  const double e0 = find_level(breit_rabi_levels(s, 0.0), {2, -2}).energy_hz;
  for (double b : {2e-3, 8e-3, 16e-3}) {
    // (F=2, mF=-2) is the pure |mJ=-1/2, mI=-3/2> product state
    const double e = find_level(breit_rabi_levels(s, b), {2, -2}).energy_hz;
    CHECK(e - e0 == doctest::Approx(slope_hz_per_t * b).epsilon(1e-10));
  }
}

TEST_CASE("eigenvectors stay orthonormal and labels complete") {
  const ion_species s = be();
  const auto levels = breit_rabi_levels(s, 12e-3);
  for (size_t a = 0; a < levels.size(); ++a)
    for (size_t b = 0; b < levels.size(); ++b) {
      const std::complex<double> ov = levels[a].eigenvector.dot(levels[b].eigenvector);
      CHECK(std::abs(ov - (a == b ? 1.0 : 0.0)) <= 1e-12);
    }
  for (double f : {1.0, 2.0})
    for (double mf = -f; mf <= f; mf += 1.0) CHECK_NOTHROW(find_level(levels, {f, mf}));
}

TEST_CASE("label continuity: energies vary smoothly with field") {
  const ion_species s = be();
  double prev = find_level(breit_rabi_levels(s, 10e-3), {2, 0}).energy_hz;
  for (int k = 1; k <= 10; ++k) {
    const double b = 10e-3 + 0.2e-3 * k;
    const double e = find_level(breit_rabi_levels(s, b), {2, 0}).energy_hz;
    CHECK(std::abs(e - prev) < 10e6);  // < 10 MHz per 0.2 mT step
    prev = e;
  }
}

TEST_CASE("transverse moment at zero field matches the angular-momentum sum") {
  const ion_species s = be();
  // <2,0| mu_x |1,1> -> g_J mu_B / (4 sqrt(2)) as B -> 0 (nuclear term is a
  // per-mille correction at g_i/g_j ~ 2e-4)
  const double el = std::abs(dipole_matrix_element(s, {2, 0}, {1, 1}, dipole_axis::x, 1e-8));
  CHECK(el == doctest::Approx(s.g_j * codata().mu_b / (4.0 * std::sqrt(2.0))).epsilon(1e-3));
}

TEST_CASE("diagonal moments obey -dE/dB") {
  const ion_species s = be();
  const double b0 = 11.9e-3, h = 1e-7;
  for (level_label lab : {level_label{2, 2}, {2, 0}, {1, 1}, {2, -1}}) {
    const double ep = find_level(breit_rabi_levels(s, b0 + h), lab).energy_hz;
    const double em = find_level(breit_rabi_levels(s, b0 - h), lab).energy_hz;
    const double mu_fd = -codata().h * (ep - em) / (2 * h);
    const double mu = dipole_matrix_element(s, lab, lab, dipole_axis::z, b0).real();
    CHECK(mu == doctest::Approx(mu_fd).epsilon(1e-6));
  }
}

TEST_CASE("selection rules") {
  const ion_species s = be();
  const double b = 12e-3;
  const double scale = codata().mu_b;
  // mu_z connects only equal mF, mu_x only |dmF| = 1
  CHECK(std::abs(dipole_matrix_element(s, {2, 2}, {2, 0}, dipole_axis::z, b)) < 1e-12 * scale);
  CHECK(std::abs(dipole_matrix_element(s, {1, 1}, {2, 0}, dipole_axis::z, b)) < 1e-12 * scale);
  CHECK(std::abs(dipole_matrix_element(s, {2, 2}, {2, 0}, dipole_axis::x, b)) < 1e-12 * scale);
  CHECK(std::abs(dipole_matrix_element(s, {1, 1}, {2, 0}, dipole_axis::x, b)) > 0.1 * scale);
}

TEST_CASE("clock point of the (1,1)-(2,0) pair") {
  const ion_species s = be();
  const clock_point cp = field_independent_point(s, {1, 1}, {2, 0}, 5e-3, 20e-3);
  CHECK(cp.b_tesla == doctest::Approx(11.9446e-3).epsilon(1e-3));
  CHECK(cp.second_derivative > 0);
  const double w0 = transition_frequency(s, {1, 1}, {2, 0}, cp.b_tesla);
  CHECK(w0 / (2 * M_PI) == doctest::Approx(1207.496e6).epsilon(1e-4));
  // monotone slope bracket missing -> error
  CHECK_THROWS_AS(field_independent_point(s, {1, 1}, {2, 0}, 14e-3, 20e-3), convergence_error);
}

TEST_CASE("qubit pair moments at the clock point") {
  const ion_species s = be();
  const clock_point cp = field_independent_point(s, {1, 1}, {2, 0}, 5e-3, 20e-3);
  const qubit_pair clock = make_qubit_pair(s, {1, 1}, {2, 0}, cp.b_tesla);
  CHECK(clock.mu_x_updown / codata().mu_b == doctest::Approx(0.48332).epsilon(1e-3));
  // at the stationary point the two diagonal moments coincide
  CHECK(clock.mu_eff() / codata().mu_b == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
  const qubit_pair zz = make_qubit_pair(s, {2, 2}, {2, 0}, cp.b_tesla);
  CHECK(zz.mu_z_up / codata().mu_b == doctest::Approx(-1.0018).epsilon(1e-3));
  CHECK(zz.mu_z_down / codata().mu_b == doctest::Approx(0.25886).epsilon(1e-3));
  CHECK(zz.mu_eff() / codata().mu_b == doctest::Approx(-0.63032).epsilon(1e-3));
}

TEST_CASE("input validation") {
  const ion_species s = be();
  CHECK_THROWS_AS(breit_rabi_levels(s, -1e-3), invalid_argument_error);
  CHECK_THROWS_AS(hyperfine_hamiltonian(s, -1.0), invalid_argument_error);
  CHECK_THROWS_AS(transition_frequency(s, {1, 1}, {1, 1}, 1e-3), invalid_argument_error);
  CHECK_THROWS_AS(find_level(breit_rabi_levels(s, 1e-3), {7, 0}), invalid_argument_error);
  CHECK_THROWS_AS(make_qubit_pair(s, {2, 0}, {1, 1}, 12e-3), invalid_argument_error);
  ion_species bad = s;
  bad.nuclear_spin = 0.3;
  CHECK_THROWS_AS(bad.validate(), invalid_argument_error);
}
