#include "iongate/fields.hpp"

#include <cmath>

#include "iongate/constants.hpp"
#include "iongate/error.hpp"

namespace iongate {

namespace {

constexpr double kMinDistance = 1e-9;  // m, singularity guard

double mu0_over_2pi() { return codata().mu0 / (2.0 * M_PI); }

}  // namespace

conductor conductor::wire(double x, double z, int direction) {
  conductor c;
  c.kind = kind_t::thin_wire;
  c.x = x;
  c.z = z;
  c.direction = direction;
  return c;
}

conductor conductor::strip(double z1, double z2, int direction) {
  if (!(z2 > z1)) throw invalid_argument_error("conductor::strip: need z2 > z1");
  conductor c;
  c.kind = kind_t::strip;
  c.z1 = z1;
  c.z2 = z2;
  c.direction = direction;
  return c;
}

drive_tone drive_tone::make(double omega, double phase) {
  if (omega < 0) throw invalid_argument_error("drive_tone: omega must be >= 0");
  // normalize to (-pi, pi]
  double p = std::remainder(phase, 2.0 * M_PI);
  if (p <= -M_PI) p += 2.0 * M_PI;
  return drive_tone{omega, p};
}

field_sample& field_sample::operator+=(const field_sample& o) {
  b += o.b;
  jacobian += o.jacobian;
  return *this;
}

field_sample field_sample::operator*(double s) const {
  field_sample out;
  out.b = b * s;
  out.jacobian = jacobian * s;
  return out;
}

field_sample field_of_wire(const conductor& wire, double current, const Eigen::Vector3d& point) {
  const double dx = point.x() - wire.x;
  const double dz = point.z() - wire.z;
  const double r2 = dx * dx + dz * dz;
  if (r2 < kMinDistance * kMinDistance)
    throw singularity_error("field_of_wire: point within 1 nm of the wire");
  const double k = mu0_over_2pi() * current * wire.direction;
  field_sample s;
  s.b.x() = k * dz / r2;
  s.b.z() = -k * dx / r2;
  const double r4 = r2 * r2;
  s.jacobian(0, 0) = -2.0 * k * dx * dz / r4;
  s.jacobian(0, 2) = k * (dx * dx - dz * dz) / r4;
  s.jacobian(2, 0) = s.jacobian(0, 2);
  s.jacobian(2, 2) = -s.jacobian(0, 0);
  return s;
}

field_sample field_of_strip(const conductor& strip, double current, const Eigen::Vector3d& point) {
  const double x = point.x();
  const double z = point.z();
  // distance from the segment {x=0, z in [z1,z2]}
  const double dz_out = (z < strip.z1) ? strip.z1 - z : (z > strip.z2 ? z - strip.z2 : 0.0);
  const double dist = std::hypot(x, dz_out);
  if (dist < kMinDistance)
    throw singularity_error("field_of_strip: evaluation point on the strip");
  const double sheet = current * strip.direction / (strip.z2 - strip.z1);  // A/m
  const double c = mu0_over_2pi() * sheet;
  const double u1 = z - strip.z1;
  const double u2 = z - strip.z2;
  const double r1 = x * x + u1 * u1;
  const double r2 = x * x + u2 * u2;
  field_sample s;
  s.b.x() = 0.5 * c * std::log(r1 / r2);
  s.b.z() = -c * (std::atan2(u1, x) - std::atan2(u2, x));
  s.jacobian(0, 0) = c * x * (1.0 / r1 - 1.0 / r2);
  s.jacobian(0, 2) = c * (u1 / r1 - u2 / r2);
  s.jacobian(2, 0) = s.jacobian(0, 2);
  s.jacobian(2, 2) = -s.jacobian(0, 0);
  return s;
}

field_sample field_of_conductor(const conductor& c, double current, const Eigen::Vector3d& point) {
  return c.kind == conductor::kind_t::thin_wire ? field_of_wire(c, current, point)
                                                : field_of_strip(c, current, point);
}

field_sample field_of_layout(const std::vector<conductor>& conductors,
                             const std::vector<double>& currents, const Eigen::Vector3d& point) {
  if (conductors.size() != currents.size())
    throw invalid_argument_error("field_of_layout: conductor/current count mismatch");
  field_sample total;
  for (size_t i = 0; i < conductors.size(); ++i)
    total += field_of_conductor(conductors[i], currents[i], point);
  return total;
}

null_solution solve_null_currents(const std::vector<conductor>& conductors,
                                  const std::vector<std::optional<double>>& fixed,
                                  const Eigen::Vector3d& point) {
  if (conductors.size() != fixed.size())
    throw invalid_argument_error("solve_null_currents: conductor/current count mismatch");
  std::vector<int> free_idx;
  Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
  int n_fixed = 0;
  double max_single = 0.0;
  for (size_t i = 0; i < conductors.size(); ++i) {
    const field_sample per_amp = field_of_conductor(conductors[i], 1.0, point);
    if (fixed[i]) {
      ++n_fixed;
      rhs -= *fixed[i] * Eigen::Vector2d(per_amp.b.x(), per_amp.b.z());
      max_single = std::max(max_single, std::abs(*fixed[i]) * per_amp.b.norm());
    } else {
      free_idx.push_back(static_cast<int>(i));
    }
  }
  if (n_fixed < 1 || free_idx.size() < 2)
    throw invalid_argument_error("solve_null_currents: need >= 1 fixed and >= 2 free currents");

  Eigen::MatrixXd a(2, free_idx.size());
  for (size_t k = 0; k < free_idx.size(); ++k) {
    const field_sample per_amp = field_of_conductor(conductors[free_idx[k]], 1.0, point);
    a(0, k) = per_amp.b.x();
    a(1, k) = per_amp.b.z();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  if (svd.rank() < 2)
    throw convergence_error("solve_null_currents: rank-deficient system (rank " +
                            std::to_string(svd.rank()) + "), null not achievable");
  const Eigen::VectorXd sol = svd.solve(rhs);

  null_solution out;
  out.currents.resize(conductors.size());
  for (size_t i = 0; i < conductors.size(); ++i) out.currents[i] = fixed[i] ? *fixed[i] : 0.0;
  for (size_t k = 0; k < free_idx.size(); ++k) {
    out.currents[free_idx[k]] = sol(k);
    const field_sample per_amp = field_of_conductor(conductors[free_idx[k]], 1.0, point);
    max_single = std::max(max_single, std::abs(sol(k)) * per_amp.b.norm());
  }
  out.achieved = field_of_layout(conductors, out.currents, point);  // independent re-evaluation
  out.max_single_conductor_field = max_single;
  if (out.achieved.b.norm() >= 1e-9 * max_single)
    throw convergence_error("solve_null_currents: residual |B| = " +
                            std::to_string(out.achieved.b.norm()) + " T exceeds tolerance");
  return out;
}

namespace {

// Fit equations for the dimensionless (d0 = 1) five-wire geometry with the
// ratio pinned at -2.5. Unknowns: center width a, side interval [c1, c2].
struct five_wire_equations {
  double bx_target, grad_target;

  Eigen::Vector3d operator()(const Eigen::Vector3d& p) const {
    const double a = p(0), c1 = p(1), c2 = p(2);
    const conductor center = conductor::strip(-a / 2, a / 2);
    const conductor side_p = conductor::strip(c1, c2);
    const conductor side_n = conductor::strip(-c2, -c1);
    const Eigen::Vector3d ion(1.0, 0.0, 0.0);
    const field_sample fp = field_of_strip(side_p, 1.0, ion);
    const field_sample fn = field_of_strip(side_n, 1.0, ion);
    const field_sample fc = field_of_strip(center, 1.0, ion);
    field_sample gate = fc;
    gate += (fp * -2.5);
    gate += (fn * -2.5);
    Eigen::Vector3d f;
    f(0) = std::abs((fp.b - fn.b).x()) - bx_target;  // rotation pattern
    f(1) = gate.b.z();                               // null condition
    f(2) = gate.jacobian(2, 0) - grad_target;        // gate gradient
    return f;
  }
};

}  // namespace

five_wire_design design_five_wire(double d0) {
  if (!(d0 > 0)) throw invalid_argument_error("design_five_wire: d0 must be > 0");
  // The equations are scale-free in units of d0, so solve once at d0 = 1.
  const double bx_target = 1.5e-7;
  const double grad_target = 2.5e-7;
  const five_wire_equations eqs{bx_target, grad_target};
  Eigen::Vector3d p(1.27, 1.49, 3.00);
  Eigen::Vector3d f = eqs(p);
  const double scale = std::max(bx_target, grad_target);
  for (int it = 0; it < 60 && f.norm() > 1e-14 * scale; ++it) {
    Eigen::Matrix3d jac;
    const double h = 1e-7;
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d pp = p, pm = p;
      pp(k) += h;
      pm(k) -= h;
      jac.col(k) = (eqs(pp) - eqs(pm)) / (2 * h);
    }
    Eigen::Vector3d step = jac.fullPivLu().solve(-f);
    // keep the geometry admissible: widths positive, sides ordered
    double damp = 1.0;
    for (int half = 0; half < 30; ++half) {
      const Eigen::Vector3d cand = p + damp * step;
      if (cand(0) > 0 && cand(1) > 0 && cand(2) > cand(1)) {
        const Eigen::Vector3d fc = eqs(cand);
        if (fc.norm() < f.norm() || damp < 1e-3) {
          p = cand;
          f = fc;
          break;
        }
      }
      damp *= 0.5;
    }
  }
  if (f.norm() > 1e-9 * scale)
    throw convergence_error("design_five_wire: fit not converged, residuals (" +
                            std::to_string(f(0)) + ", " + std::to_string(f(1)) + ", " +
                            std::to_string(f(2)) + ") T");

  five_wire_design d;
  d.d0 = d0;
  d.center = conductor::strip(-p(0) * d0 / 2, p(0) * d0 / 2);
  d.side_pos = conductor::strip(p(1) * d0, p(2) * d0);
  d.side_neg = conductor::strip(-p(2) * d0, -p(1) * d0);
  d.ratio = -2.5;
  d.fit_residual = f.norm() / scale;

  const Eigen::Vector3d ion = d.ion();
  const field_sample rot = field_of_layout(d.conductors(), d.rotation_currents(1.0), ion);
  const field_sample gate = field_of_layout(d.conductors(), d.gate_currents(1.0), ion);
  const field_sample center_only = field_of_conductor(d.center, 1.0, ion);
  d.bx_per_amp = std::abs(rot.b.x());
  d.gradient_per_amp = gate.jacobian(2, 0);
  d.null_residual_rel = gate.b.norm() / center_only.b.norm();
  return d;
}

Eigen::Vector3d pickup_field(const conductor& strip, double volts, const Eigen::Vector3d& point) {
  if (strip.kind != conductor::kind_t::strip)
    throw invalid_argument_error("pickup_field: conductor must be a strip");
  const double x = point.x();
  if (!(x > kMinDistance))
    throw singularity_error("pickup_field: point must be above the electrode plane (x > 0)");
  const double z = point.z();
  const double u1 = z - strip.z1;   // distance past the lower edge
  const double u2 = strip.z2 - z;   // distance short of the upper edge
  const double r1 = x * x + u1 * u1;
  const double r2 = x * x + u2 * u2;
  // potential phi = (V/pi) [atan(u2/x) + atan(u1/x)], E = -grad phi
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  e.x() = volts / M_PI * (u2 / r2 + u1 / r1);
  e.z() = volts / M_PI * (x / r2 - x / r1);
  return e;
}

}  // namespace iongate
