#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "iongate/chain.hpp"
#include "iongate/constants.hpp"
#include "iongate/error.hpp"
#include "iongate/species.hpp"

using namespace iongate;

namespace {

chain_config cfg(int n, double fy = 1e6, double ft = 5e6) {
  const double m = species_registry::defaults().get("Be9+").mass_kg;
  return chain_config{n, m, 2 * M_PI * fy, 2 * M_PI * ft, 2 * M_PI * ft};
}

}  // namespace

TEST_CASE("two-ion separation has the closed form 2 (1/4)^(1/3) l") {
  const chain_config c = cfg(2);
  const Eigen::VectorXd u = equilibrium_positions(c);
  const double l = chain_length_scale(c);
  CHECK(u(1) == doctest::Approx(std::cbrt(0.25) * l).epsilon(1e-10));
  CHECK(u(0) == doctest::Approx(-u(1)).epsilon(1e-12));
}

TEST_CASE("three-ion outer position is 1.0772 in scaled units") {
  const chain_config c = cfg(3);
  const Eigen::VectorXd u = equilibrium_positions(c) / chain_length_scale(c);
  CHECK(u(1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(u(2) == doctest::Approx(std::cbrt(5.0 / 4.0)).epsilon(1e-6));  // 1.07722
}

TEST_CASE("axial spectrum: COM at omega_y, stretch at sqrt(3) omega_y") {
  for (int n : {2, 3}) {
    const chain_config c = cfg(n);
    const mode_decomposition md = normal_modes(c, mode_axis::y);
    CHECK(md.modes[0].omega == doctest::Approx(c.omega_y).epsilon(1e-10));
    CHECK(md.modes[1].omega == doctest::Approx(std::sqrt(3.0) * c.omega_y).epsilon(1e-10));
    // COM eigenvector is uniform
    for (int i = 0; i < n; ++i)
      CHECK(md.modes[0].b(i) == doctest::Approx(1.0 / std::sqrt(n)).epsilon(1e-10));
  }
}

TEST_CASE("transverse spectrum: COM at trap frequency, rocking below") {
  const chain_config c = cfg(2);
  const mode_decomposition md = normal_modes(c, mode_axis::z);
  // ascending: rocking sqrt(omega_t^2 - omega_y^2), then COM
  CHECK(md.modes[0].omega ==
        doctest::Approx(std::sqrt(c.omega_z * c.omega_z - c.omega_y * c.omega_y)).epsilon(1e-10));
  CHECK(md.modes[1].omega == doctest::Approx(c.omega_z).epsilon(1e-10));
  CHECK(md.modes[0].b(0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(md.modes[0].b(1) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("mode vectors are orthonormal up to N = 10") {
  for (int n : {3, 5, 10}) {
    for (mode_axis ax : {mode_axis::y, mode_axis::z}) {
      const mode_decomposition md = normal_modes(cfg(n), ax);
      Eigen::MatrixXd b(n, n);
      for (int k = 0; k < n; ++k) b.col(k) = md.modes[k].b;
      CHECK((b.transpose() * b - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <=
            1e-12);
    }
  }
}

TEST_CASE("transverse modes solve the eigenproblem of the numerical Hessian") {
  // independent check: second differences of the full transverse potential
  const int n = 4;
  const chain_config c = cfg(n);
  const auto& cd = codata();
  const Eigen::VectorXd y = equilibrium_positions(c);
  const double ke = cd.elementary_charge * cd.elementary_charge / (4 * M_PI * cd.epsilon0);
  auto potential = [&](const Eigen::VectorXd& z) {
    double v = 0;
    for (int i = 0; i < n; ++i) v += 0.5 * c.mass_kg * c.omega_z * c.omega_z * z(i) * z(i);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        v += ke / std::hypot(y(i) - y(j), z(i) - z(j));
    return v;
  };
  const double h = 1e-9;
  Eigen::MatrixXd hess(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd zpp = Eigen::VectorXd::Zero(n), zpm = zpp, zmp = zpp, zmm = zpp;
      zpp(i) += h; zpp(j) += h;
      zpm(i) += h; zpm(j) -= h;
      zmp(i) -= h; zmp(j) += h;
      zmm(i) -= h; zmm(j) -= h;
      hess(i, j) =
          (potential(zpp) - potential(zpm) - potential(zmp) + potential(zmm)) / (4 * h * h);
    }
  const mode_decomposition md = normal_modes(c, mode_axis::z);
  for (const auto& m : md.modes) {
    const Eigen::VectorXd r =
        hess * m.b - c.mass_kg * m.omega * m.omega * m.b;
    CHECK(r.cwiseAbs().maxCoeff() < 1e-4 * c.mass_kg * m.omega * m.omega);
  }
}

TEST_CASE("ground-state extent and convenience modes") {
  const double m = species_registry::defaults().get("Be9+").mass_kg;
  const double w = 2 * M_PI * 5e6;
  CHECK(ground_state_extent(m, w) == doctest::Approx(10.59e-9).epsilon(1e-3));
  const chain_mode rock = two_ion_rocking_mode(m, w);
  CHECK(rock.b(0) == doctest::Approx(-rock.b(1)));
  CHECK(rock.b.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rock.q0 == doctest::Approx(ground_state_extent(m, w)));
  const chain_mode com = two_ion_com_mode(m, w);
  CHECK(com.b(0) == doctest::Approx(com.b(1)));
}

TEST_CASE("zig-zag instability raises a convergence error") {
  // transverse confinement too weak for a linear chain
  CHECK_THROWS_AS(normal_modes(cfg(2, 1e6, 0.9e6), mode_axis::z), convergence_error);
}

TEST_CASE("input validation") {
  chain_config bad = cfg(2);
  bad.n = 0;
  CHECK_THROWS_AS(bad.validate(), invalid_argument_error);
  CHECK_THROWS_AS(ground_state_extent(-1.0, 1.0), invalid_argument_error);
  CHECK_THROWS_AS(ground_state_extent(1e-26, 0.0), invalid_argument_error);
}
