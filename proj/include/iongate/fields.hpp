#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace iongate {

// Quasi-static 2D magnetostatics of y-aligned planar conductors. The trap
// electrodes lie in the x=0 plane (spanning y and z); the ion sits above the
// plane at x > 0. Conductors are infinite along y, so B has no y component
// and nothing depends on y. Oscillating drives are handled as dc fields
// multiplied by cos(omega t + phi); eddy-current corrections (relevant only
// well above ~20 MHz) are out of scope.

struct conductor {
  enum class kind_t { thin_wire, strip };
  kind_t kind = kind_t::thin_wire;
  // thin_wire: position in the xz plane
  double x = 0, z = 0;
  // strip: z-interval in the x = 0 plane, z2 > z1
  double z1 = 0, z2 = 0;
  int direction = +1;  // current sense along +y (+1) or -y (-1)

  static conductor wire(double x, double z, int direction = +1);
  static conductor strip(double z1, double z2, int direction = +1);
};

// Oscillating drive tone; phase normalized to (-pi, pi].
struct drive_tone {
  double omega = 0;  // rad/s, >= 0
  double phase = 0;  // rad

  static drive_tone make(double omega, double phase);
};

struct field_sample {
  Eigen::Vector3d b = Eigen::Vector3d::Zero();        // T
  Eigen::Matrix3d jacobian = Eigen::Matrix3d::Zero(); // dB_i/dx_j, T/m

  field_sample& operator+=(const field_sample& o);
  field_sample operator*(double s) const;
};

// Field and analytic jacobian of a single conductor carrying current I (A).
field_sample field_of_wire(const conductor& wire, double current, const Eigen::Vector3d& point);
field_sample field_of_strip(const conductor& strip, double current, const Eigen::Vector3d& point);
field_sample field_of_conductor(const conductor& c, double current, const Eigen::Vector3d& point);

// Linear superposition over a layout.
field_sample field_of_layout(const std::vector<conductor>& conductors,
                             const std::vector<double>& currents, const Eigen::Vector3d& point);

struct null_solution {
  std::vector<double> currents;       // full assignment, fixed entries preserved
  field_sample achieved;              // re-evaluated field at the point
  double max_single_conductor_field;  // scale used for the residual criterion
};

// Solve the free currents (entries of `fixed` that are nullopt) so that
// B(point) = 0, by linear least squares on (Bx, Bz). The residual is checked
// by independent re-evaluation, not solver status.
null_solution solve_null_currents(const std::vector<conductor>& conductors,
                                  const std::vector<std::optional<double>>& fixed,
                                  const Eigen::Vector3d& point);

// Five-wire surface-trap current geometry fitted so that, at the ion position
// (d0, 0, 0):
//   * antiparallel unit currents in the side electrodes give
//     |B_x| = 1.5e-7 / d0 T per A,
//   * unit current in the center electrode plus `ratio` in both side
//     electrodes gives a field null with gradient
//     dBz/dx = dBx/dz = 2.5e-7 / d0^2 T/m per A.
struct five_wire_design {
  double d0 = 0;
  conductor center;       // electrode (a)
  conductor side_pos;     // electrode at z > 0
  conductor side_neg;     // electrode at z < 0
  double ratio = -2.5;    // side/center current ratio in the gate pattern
  double bx_per_amp = 0;      // T/A, rotation pattern
  double gradient_per_amp = 0;  // T/m/A, gate pattern
  double null_residual_rel = 0; // |B|/|B_center| at the ion, gate pattern
  double fit_residual = 0;      // max relative equation residual of the fit

  Eigen::Vector3d ion() const { return {d0, 0, 0}; }
  std::vector<conductor> conductors() const { return {center, side_pos, side_neg}; }
  // currents per ampere of drive: gate pattern (1, r, r), rotation (0, 1, -1)
  std::vector<double> gate_currents(double amps) const { return {amps, ratio * amps, ratio * amps}; }
  std::vector<double> rotation_currents(double amps) const { return {0.0, amps, -amps}; }
};

// The published coefficients leave the electrode widths underdetermined; this
// fixes ratio = -2.5 and solves for the three geometric unknowns. The returned
// layout is one member of a one-parameter family (flagged in reports).
five_wire_design design_five_wire(double d0);

// Electric field above a grounded plane with one strip held at `volts`,
// gapless-plane approximation (half-plane Poisson kernel in closed form).
Eigen::Vector3d pickup_field(const conductor& strip, double volts, const Eigen::Vector3d& point);

}  // namespace iongate
