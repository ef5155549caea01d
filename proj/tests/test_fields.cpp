#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "iongate/constants.hpp"
#include "iongate/error.hpp"
#include "iongate/fields.hpp"

using namespace iongate;

namespace {

// quadrature oracle: a strip as a sum of many thin filaments (midpoint rule)
field_sample strip_by_filaments(const conductor& s, double current, const Eigen::Vector3d& p,
                                int n) {
  field_sample total;
  const double w = s.z2 - s.z1;
  for (int k = 0; k < n; ++k) {
    const double z = s.z1 + w * (k + 0.5) / n;
    total += field_of_wire(conductor::wire(0.0, z, s.direction), current / n, p);
  }
  return total;
}

}  // namespace

TEST_CASE("thin wire field magnitude and direction") {
  // 1 A at 10 um -> mu0 I / (2 pi d) ~ 0.02 T, pointing along -z above the
  // wire (mu0 is the measured CODATA value, not exactly 4 pi x 1e-7)
  const field_sample f = field_of_wire(conductor::wire(0, 0), 1.0, {10e-6, 0, 0});
  CHECK(f.b.x() == doctest::Approx(0.0));
  CHECK(f.b.z() == doctest::Approx(-0.02).epsilon(1e-9));
  CHECK(f.b.y() == 0.0);
  // at 100 um: 2 mT and 20 T/m gradient scale
  const field_sample g = field_of_wire(conductor::wire(0, 0), 1.0, {100e-6, 0, 0});
  CHECK(g.b.norm() == doctest::Approx(2e-3).epsilon(1e-9));
  CHECK(std::abs(g.jacobian(0, 2)) == doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("narrow strip converges to the thin wire") {
  const Eigen::Vector3d p(1e-4, 0, 3e-5);
  const field_sample wire = field_of_wire(conductor::wire(0, 0), 0.8, p);
  const field_sample strip = field_of_strip(conductor::strip(-5e-8, 5e-8), 0.8, p);
  CHECK((strip.b - wire.b).norm() < 1e-6 * wire.b.norm());
  CHECK((strip.jacobian - wire.jacobian).norm() < 1e-6 * wire.jacobian.norm());
}

TEST_CASE("strip field and jacobian match the filament quadrature oracle") {
  const conductor s = conductor::strip(-2e-5, 1e-5);
  const Eigen::Vector3d p(3e-5, 0, 1.5e-5);
  const field_sample exact = field_of_strip(s, 0.7, p);
  const field_sample quad = strip_by_filaments(s, 0.7, p, 4000);
  CHECK((exact.b - quad.b).norm() < 1e-7 * exact.b.norm());
  CHECK((exact.jacobian - quad.jacobian).norm() < 1e-6 * exact.jacobian.norm());
}

TEST_CASE("strip jacobian agrees with finite differences") {
  const conductor s = conductor::strip(-2e-5, 2.5e-5);
  const Eigen::Vector3d p(2.2e-5, 0, -1e-5);
  const field_sample f = field_of_strip(s, 1.3, p);
  const double h = 1e-11;
  for (int col : {0, 2}) {
    Eigen::Vector3d pp = p, pm = p;
    pp(col) += h;
    pm(col) -= h;
    const Eigen::Vector3d fd =
        (field_of_strip(s, 1.3, pp).b - field_of_strip(s, 1.3, pm).b) / (2 * h);
    CHECK(std::abs(fd.x() - f.jacobian(0, col)) < 1e-5 * f.jacobian.norm());
    CHECK(std::abs(fd.z() - f.jacobian(2, col)) < 1e-5 * f.jacobian.norm());
  }
}

TEST_CASE("jacobian is symmetric and traceless") {
  const field_sample fw = field_of_wire(conductor::wire(1e-5, -2e-5), 2.0, {4e-5, 0, 3e-5});
  const field_sample fs = field_of_strip(conductor::strip(-3e-5, -1e-5), -1.5, {2e-5, 0, 1e-5});
  for (const field_sample& f : {fw, fs}) {
    CHECK(std::abs(f.jacobian(0, 2) - f.jacobian(2, 0)) <= 1e-8 * f.jacobian.norm());
    CHECK(std::abs(f.jacobian.trace()) <= 1e-8 * f.jacobian.norm());
  }
}

TEST_CASE("mirror symmetry of a symmetric strip") {
  const conductor s = conductor::strip(-2e-5, 2e-5);
  const field_sample fp = field_of_strip(s, 1.0, {3e-5, 0, 1.2e-5});
  const field_sample fm = field_of_strip(s, 1.0, {3e-5, 0, -1.2e-5});
  CHECK(fp.b.x() == doctest::Approx(-fm.b.x()).epsilon(1e-12));  // Bx odd in z
  CHECK(fp.b.z() == doctest::Approx(fm.b.z()).epsilon(1e-12));   // Bz even in z
}

TEST_CASE("superposition is exact") {
  const std::vector<conductor> cs = {conductor::wire(0, -3e-5), conductor::strip(1e-5, 4e-5)};
  const std::vector<double> is = {1.2, -0.4};
  const Eigen::Vector3d p(5e-5, 0, 2e-5);
  field_sample sum = field_of_conductor(cs[0], is[0], p);
  sum += field_of_conductor(cs[1], is[1], p);
  const field_sample tot = field_of_layout(cs, is, p);
  CHECK((tot.b - sum.b).norm() <= 1e-12 * sum.b.norm());
  CHECK((tot.jacobian - sum.jacobian).norm() <= 1e-12 * sum.jacobian.norm());
}

TEST_CASE("null solver zeroes the field and re-checks independently") {
  const five_wire_design d = design_five_wire(25e-6);
  std::vector<std::optional<double>> fixed = {1.0, std::nullopt, std::nullopt};
  const null_solution sol = solve_null_currents(d.conductors(), fixed, d.ion());
  CHECK(sol.achieved.b.norm() < 1e-9 * sol.max_single_conductor_field);
  CHECK(sol.currents[0] == 1.0);
  // the symmetric layout needs symmetric side currents
  CHECK(sol.currents[1] == doctest::Approx(sol.currents[2]).epsilon(1e-9));
  CHECK(sol.currents[1] == doctest::Approx(-2.5).epsilon(1e-9));
}

TEST_CASE("null solver input validation") {
  const five_wire_design d = design_five_wire(25e-6);
  std::vector<std::optional<double>> too_few = {1.0, std::nullopt};
  CHECK_THROWS_AS(
      solve_null_currents({d.center, d.side_pos}, too_few, d.ion()),
      invalid_argument_error);
  // two coincident free conductors are rank deficient
  std::vector<conductor> degenerate = {d.center, d.side_pos, d.side_pos};
  std::vector<std::optional<double>> fixed = {1.0, std::nullopt, std::nullopt};
  CHECK_THROWS_AS(solve_null_currents(degenerate, fixed, d.ion()), convergence_error);
}

TEST_CASE("five-wire design hits the published coefficients and scales") {
  const double d0 = 30e-6;
  const five_wire_design d = design_five_wire(d0);
  CHECK(d.bx_per_amp == doctest::Approx(1.5e-7 / d0).epsilon(0.05));
  CHECK(d.gradient_per_amp == doctest::Approx(2.5e-7 / (d0 * d0)).epsilon(0.05));
  CHECK(d.null_residual_rel < 1e-6);
  const five_wire_design d2 = design_five_wire(2 * d0);
  CHECK(d2.bx_per_amp == doctest::Approx(d.bx_per_amp / 2).epsilon(1e-9));
  CHECK(d2.gradient_per_amp == doctest::Approx(d.gradient_per_amp / 4).epsilon(1e-9));
  // scale-free geometry
  CHECK(d2.center.z2 == doctest::Approx(2 * d.center.z2).epsilon(1e-9));
  CHECK(d2.side_pos.z1 == doctest::Approx(2 * d.side_pos.z1).epsilon(1e-9));
}

TEST_CASE("pickup field matches the boundary-integral quadrature") {
  // independent oracle: half-plane Dirichlet kernel phi(x,z) =
  // (x/pi) int V dz' / (x^2 + (z-z')^2), gradient by central differences
  const conductor s = conductor::strip(-1.8e-5, 2.2e-5);
  const double volts = 0.37;
  auto phi = [&](double x, double z) {
    const int n = 20000;
    double acc = 0;
    const double w = s.z2 - s.z1;
    for (int k = 0; k < n; ++k) {
      const double zp = s.z1 + w * (k + 0.5) / n;
      acc += (w / n) / (x * x + (z - zp) * (z - zp));
    }
    return volts * x / M_PI * acc;
  };
  const double x0 = 2.7e-5, z0 = 0.8e-5, h = 1e-9;
  const Eigen::Vector3d e = pickup_field(s, volts, {x0, 0, z0});
  CHECK(e.x() == doctest::Approx(-(phi(x0 + h, z0) - phi(x0 - h, z0)) / (2 * h)).epsilon(1e-5));
  CHECK(e.z() == doctest::Approx(-(phi(x0, z0 + h) - phi(x0, z0 - h)) / (2 * h)).epsilon(1e-5));
}

TEST_CASE("pickup field above the designed center electrode (frozen)") {
  const five_wire_design d = design_five_wire(30e-6);
  const Eigen::Vector3d e = pickup_field(d.center, 1.0, d.ion());
  CHECK(e.norm() == doctest::Approx(9614.67).epsilon(1e-3));
  CHECK(std::abs(e.z()) < 1e-9 * e.norm());  // on the symmetry axis
}

TEST_CASE("singularity guards and validation") {
  CHECK_THROWS_AS(field_of_wire(conductor::wire(0, 0), 1.0, {1e-10, 0, 0}), singularity_error);
  CHECK_THROWS_AS(field_of_strip(conductor::strip(-1e-5, 1e-5), 1.0, {0, 0, 0}),
                  singularity_error);
  CHECK_THROWS_AS(conductor::strip(1e-5, -1e-5), invalid_argument_error);
  CHECK_THROWS_AS(pickup_field(conductor::strip(-1e-5, 1e-5), 1.0, {-1e-5, 0, 0}),
                  singularity_error);
  CHECK_THROWS_AS(pickup_field(conductor::wire(0, 0), 1.0, {1e-5, 0, 0}),
                  invalid_argument_error);
  CHECK_THROWS_AS(design_five_wire(-1.0), invalid_argument_error);
}

TEST_CASE("drive tone phase normalization") {
  CHECK(drive_tone::make(1.0, 3 * M_PI).phase == doctest::Approx(M_PI));
  CHECK(drive_tone::make(1.0, -M_PI / 2).phase == doctest::Approx(-M_PI / 2));
  CHECK(drive_tone::make(1.0, 2 * M_PI).phase == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(drive_tone::make(-1.0, 0.0), invalid_argument_error);
}
