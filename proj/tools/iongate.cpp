#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "iongate/atomic.hpp"
#include "iongate/chain.hpp"
#include "iongate/config.hpp"
#include "iongate/constants.hpp"
#include "iongate/error.hpp"
#include "iongate/evolve.hpp"
#include "iongate/fields.hpp"
#include "iongate/gates.hpp"
#include "iongate/reproduce.hpp"
#include "iongate/species.hpp"

namespace {

using namespace iongate;

struct cli_options {
  std::string config_path;
  std::string out_dir;
  std::string format = "table";
  bool seedless = false;
};

// Everything the subcommands share, derived once from the config.
struct pipeline {
  run_config cfg;
  ion_species sp;
  double b0 = 0;
  qubit_pair pair;
  five_wire_design fw;
  chain_mode mode;
  double tau = 0, delta = 0, current = 0;

  explicit pipeline(const run_config& c) : cfg(c) {
    if (!cfg.tau && !cfg.delta && !cfg.current) cfg.tau = 20e-6;
    sp = cfg.resolve_species();
    if (cfg.auto_clock)
      b0 = field_independent_point(sp, cfg.up, cfg.down, 5e-3, 20e-3).b_tesla;
    else
      b0 = cfg.bias_tesla;
    pair = make_qubit_pair(sp, cfg.up, cfg.down, b0);
    fw = design_five_wire(cfg.d0);
    mode = (cfg.gate_mode == "com") ? two_ion_com_mode(sp.mass_kg, cfg.mode_frequency)
                                    : two_ion_rocking_mode(sp.mass_kg, cfg.mode_frequency);
    if (cfg.tau) {
      tau = *cfg.tau;
      delta = 2 * M_PI / tau;
      current = solve_gate_current(tau, fw, mode, cfg.motion_axis, pair, cfg.kind);
    } else if (cfg.delta) {
      delta = *cfg.delta;
      tau = 2 * M_PI / delta;
      current = solve_gate_current(tau, fw, mode, cfg.motion_axis, pair, cfg.kind);
    } else {
      current = *cfg.current;
      // forward model: delta = 4 Omega_jn at this current
      const field_sample per_amp =
          field_of_layout(fw.conductors(), fw.gate_currents(1.0), fw.ion());
      const rabi_set r = rabi_frequencies(per_amp, current, pair, mode, cfg.motion_axis);
      const Eigen::MatrixXd& m =
          (cfg.kind == gate_kind::zz) ? r.omega_z_jn : r.omega_x_jn;
      delta = 4.0 * std::abs(m(0, 0));
      if (!(delta > 0)) throw invalid_argument_error("gate: zero coupling at this current");
      tau = 2 * M_PI / delta;
    }
  }

  gate_spec spec() const {
    gate_spec g;
    g.kind = cfg.kind;
    g.mode = mode;
    g.motion_axis = cfg.motion_axis;
    g.delta = delta;
    g.tau = tau;
    g.phi_b = cfg.phi_b;
    g.phi_r = cfg.phi_r;
    g.current_amps = current;
    g.pair = pair;
    return g;
  }

  rabi_set gate_rabi() const {
    const field_sample per_amp =
        field_of_layout(fw.conductors(), fw.gate_currents(1.0), fw.ion());
    return rabi_frequencies(per_amp, current, pair, mode, cfg.motion_axis);
  }
};

std::ostream& header(std::ostream& out) {
  out << "# conventions: pi pulse t_pi = pi / (2 Omega_x), Omega_x = Bx |<d|mu_x|u>| / (2 hbar);\n"
      << "#   mu_eff = (mu_z_up - mu_z_down) / 2, both raw moments reported;\n"
      << "#   single-loop gates, tau = 2 pi / delta, delta = 4 Omega_jn;\n"
      << "#   quasi-static fields (valid well below conductor eddy response).\n";
  return out;
}

class sink {
 public:
  sink(const cli_options& opt, const std::string& name, const std::string& ext) {
    if (!opt.out_dir.empty()) {
      path_ = opt.out_dir + "/" + name + "." + ext;
      file_.open(path_);
      if (!file_) throw invalid_argument_error("cannot write '" + path_ + "'");
    }
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  ~sink() {
    if (file_.is_open()) std::cerr << "wrote " << path_ << "\n";
  }

 private:
  std::string path_;
  std::ofstream file_;
};

void cmd_levels(const pipeline& p, const cli_options& opt) {
  sink s(opt, "levels", "csv");
  std::ostream& out = s.out();
  out << std::setprecision(12);
  out << "b_mT,f,mf,energy_MHz\n";
  const int steps = 81;
  for (int i = 0; i <= steps; ++i) {
    const double b = 20e-3 * i / steps;
    for (const auto& lv : breit_rabi_levels(p.sp, b))
      out << b * 1e3 << "," << lv.label.f << "," << lv.label.mf << "," << lv.energy_hz / 1e6
          << "\n";
  }
}

void cmd_clockpoint(const pipeline& p, const cli_options& opt) {
  sink s(opt, "clockpoint", "txt");
  std::ostream& out = s.out();
  header(out) << std::setprecision(8);
  const clock_point cp = field_independent_point(p.sp, p.cfg.up, p.cfg.down, 5e-3, 20e-3);
  const double w0 = transition_frequency(p.sp, p.cfg.up, p.cfg.down, cp.b_tesla);
  out << "species          " << p.sp.name << "\n"
      << "clock field      " << cp.b_tesla * 1e3 << " mT\n"
      << "omega0 / 2 pi    " << w0 / (2 * M_PI * 1e6) << " MHz\n"
      << "d2(omega0)/dB2   " << cp.second_derivative / (2 * M_PI) << " Hz/T^2\n";
}

void cmd_fields(const pipeline& p, const cli_options& opt) {
  sink s(opt, "fields", "csv");
  std::ostream& out = s.out();
  out << std::setprecision(10);
  out << "x,z,Bx,Bz,dBx_dz,dBz_dx\n";
  std::vector<conductor> cs = p.fw.conductors();
  std::vector<double> is = p.fw.gate_currents(p.current);
  for (size_t i = 0; i < p.cfg.extra_conductors.size(); ++i) {
    cs.push_back(p.cfg.extra_conductors[i]);
    is.push_back(p.cfg.extra_currents[i]);
  }
  const int n = p.cfg.map_points;
  const double hw = p.cfg.map_halfwidth;
  for (int ix = 0; ix < n; ++ix) {
    const double x = std::max(1e-7, p.cfg.d0 - hw) +
                     (p.cfg.d0 + hw - std::max(1e-7, p.cfg.d0 - hw)) * ix / (n - 1);
    for (int iz = 0; iz < n; ++iz) {
      const double z = -hw + 2 * hw * iz / (n - 1);
      const field_sample f = field_of_layout(cs, is, {x, 0, z});
      out << x << "," << z << "," << f.b.x() << "," << f.b.z() << "," << f.jacobian(0, 2) << ","
          << f.jacobian(2, 0) << "\n";
    }
  }
}

void cmd_design(const pipeline& p, const cli_options& opt) {
  sink s(opt, "design", "txt");
  std::ostream& out = s.out();
  header(out) << std::setprecision(8);
  const auto& fw = p.fw;
  out << "five-wire layout for ion height d0 = " << fw.d0 * 1e6 << " um\n"
      << "  (the published coefficients underdetermine the widths; this layout is one\n"
      << "   member of a one-parameter family, side/center current ratio pinned at "
      << fw.ratio << ")\n"
      << "center strip     z in [" << fw.center.z1 * 1e6 << ", " << fw.center.z2 * 1e6
      << "] um\n"
      << "side strip (+z)  z in [" << fw.side_pos.z1 * 1e6 << ", " << fw.side_pos.z2 * 1e6
      << "] um\n"
      << "side strip (-z)  z in [" << fw.side_neg.z1 * 1e6 << ", " << fw.side_neg.z2 * 1e6
      << "] um\n"
      << "Bx per amp       " << fw.bx_per_amp << " T/A (target " << 1.5e-7 / fw.d0 << ")\n"
      << "gradient per amp " << fw.gradient_per_amp << " T/m/A (target "
      << 2.5e-7 / (fw.d0 * fw.d0) << ")\n"
      << "null residual    " << fw.null_residual_rel << " (relative)\n"
      << "fit residual     " << fw.fit_residual << "\n";
}

void cmd_modes(const pipeline& p, const cli_options& opt) {
  sink s(opt, "modes", "csv");
  std::ostream& out = s.out();
  out << std::setprecision(10);
  chain_config cc{p.cfg.chain_n, p.sp.mass_kg, p.cfg.chain_omega_y, p.cfg.chain_omega_x,
                  p.cfg.chain_omega_z};
  const mode_decomposition md = normal_modes(cc, p.cfg.motion_axis);
  out << "mode,omega_MHz,q0_nm";
  for (int i = 0; i < cc.n; ++i) out << ",b" << i;
  out << "\n";
  for (size_t k = 0; k < md.modes.size(); ++k) {
    const auto& m = md.modes[k];
    out << k << "," << m.omega / (2 * M_PI * 1e6) << "," << m.q0 * 1e9;
    for (int i = 0; i < cc.n; ++i) out << "," << m.b(i);
    out << "\n";
  }
}

void cmd_gate(const pipeline& p, const cli_options& opt) {
  const rabi_set rabi = p.gate_rabi();
  const gate_report rep = (p.cfg.kind == gate_kind::zz)
                              ? sigma_zz_gate(rabi, 0, p.delta)
                              : sigma_phiphi_gate(rabi, 0, p.delta, p.cfg.phi_b, p.cfg.phi_r);
  if (opt.format == "csv") {
    sink s(opt, "gate", "csv");
    std::ostream& out = s.out();
    out << std::setprecision(12);
    out << "basis,phase_rad,alpha_max,current_A\n";
    const char* basis[4] = {"uu", "ud", "du", "dd"};
    for (int k = 0; k < 4; ++k)
      out << basis[k] << "," << rep.basis_phases[k] << "," << rep.alpha_max << "," << p.current
          << "\n";
    return;
  }
  sink s(opt, "gate", "txt");
  std::ostream& out = s.out();
  header(out) << std::setprecision(8);
  out << "kind             " << (p.cfg.kind == gate_kind::zz ? "sigma-z sigma-z" : "sigma-phi sigma-phi")
      << "\n"
      << "bias field       " << p.b0 * 1e3 << " mT\n"
      << "mode frequency   " << p.mode.omega / (2 * M_PI * 1e6) << " MHz, q0 = "
      << p.mode.q0 * 1e9 << " nm\n"
      << "tau              " << p.tau * 1e6 << " us\n"
      << "delta / 2 pi     " << p.delta / (2 * M_PI * 1e3) << " kHz\n"
      << "drive current    " << p.current << " A\n"
      << "|<d|mu_x|u>|     " << p.pair.mu_x_updown / codata().mu_b << " mu_B\n"
      << "mu_z up / down   " << p.pair.mu_z_up / codata().mu_b << " / "
      << p.pair.mu_z_down / codata().mu_b << " mu_B (mu_eff "
      << p.pair.mu_eff() / codata().mu_b << " mu_B)\n"
      << "alpha_max        " << rep.alpha_max << "\n"
      << "basis phases     uu " << rep.basis_phases[0] << ", ud " << rep.basis_phases[1]
      << ", du " << rep.basis_phases[2] << ", dd " << rep.basis_phases[3] << " rad\n"
      << "note: a smooth global pulse envelope (not simulated) further suppresses\n"
      << "off-resonant excitation.\n";
}

void cmd_errors(const pipeline& p, const cli_options& opt) {
  const error_budget eb = residual_error_budget(p.fw, p.cfg.displacement, p.spec());
  if (opt.format == "csv") {
    sink s(opt, "errors", "csv");
    std::ostream& out = s.out();
    out << std::setprecision(12);
    out << "mechanism,phase_rad\n";
    for (const auto& l : eb.lines) out << '"' << l.label << "\"," << l.phase_rad << "\n";
    return;
  }
  sink s(opt, "errors", "txt");
  std::ostream& out = s.out();
  header(out) << std::setprecision(6);
  out << "displacement     (" << p.cfg.displacement.x() * 1e9 << ", "
      << p.cfg.displacement.y() * 1e9 << ", " << p.cfg.displacement.z() * 1e9 << ") nm\n"
      << "residual field   (" << eb.residual_field.x() * 1e6 << ", 0, "
      << eb.residual_field.z() * 1e6 << ") uT\n";
  for (const auto& l : eb.lines)
    out << std::left << std::setw(58) << l.label << " " << l.phase_rad * 1e3 << " mrad\n";
  out << "worst mechanism  " << eb.worst_mechanism * 1e3 << " mrad\n"
      << "summed           " << eb.summed * 1e3 << " mrad\n"
      << "electric equivalence on center electrode " << eb.electric_equivalence_volts * 1e6
      << " uV (geometry is one of a one-parameter family)\n"
      << "anharmonic suppression (q0/d0)^2 = " << eb.anharmonic_suppression_factor << "\n";
}

void cmd_evolve(const pipeline& p, const cli_options& opt) {
  const rabi_set rabi = p.gate_rabi();
  const gate_report rep = (p.cfg.kind == gate_kind::zz)
                              ? sigma_zz_gate(rabi, 0, p.delta)
                              : sigma_phiphi_gate(rabi, 0, p.delta, p.cfg.phi_b, p.cfg.phi_r);
  hilbert_spec hs;
  hs.n_qubits = 2;
  hs.modes = {{p.mode.omega, p.cfg.n_max}};
  std::vector<evolve_drive> drives;
  for (const auto& tone : p.spec().tones()) drives.push_back({tone, rabi});
  const evolve_system sys(drives, p.cfg.flags, hs, p.pair.omega0);
  const double t_final = p.cfg.t_final ? *p.cfg.t_final : p.tau;
  const spin_process proc = spin_propagator(sys, {0}, t_final, p.cfg.tolerance);
  sink s(opt, "evolve", "txt");
  std::ostream& out = s.out();
  header(out) << std::setprecision(10);
  out << "hamiltonian terms  " << sys.n_terms() << "\n"
      << "t_final            " << t_final * 1e6 << " us\n"
      << "closure defect     " << proc.closure_defect << "\n";
  if (std::abs(t_final - p.tau) < 1e-15 * p.tau)
    out << "process fidelity vs analytic propagator  "
        << process_fidelity(rep.propagator, proc.u) << "\n";
  out << "spin propagator (rows/cols uu, ud, du, dd):\n" << proc.u << "\n";
}

int cmd_reproduce(const cli_options& opt) {
  const acceptance_suite suite = run_acceptance();
  sink s(opt, "reproduce", "txt");
  s.out() << format_acceptance(suite);
  if (!opt.out_dir.empty()) std::cout << format_acceptance(suite);
  return suite.all_pass() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surface-trap magnetic-field quantum gate calculator"};
  app.require_subcommand(1);
  cli_options opt;
  app.add_option("--config", opt.config_path, "run configuration file");
  app.add_option("--out", opt.out_dir, "artifact output directory");
  app.add_option("--format", opt.format, "csv or table")
      ->check(CLI::IsMember({"csv", "table"}));
  app.add_flag("--seedless", opt.seedless, "assert no RNG anywhere (always true here)");
  const char* subs[] = {"levels",  "clockpoint", "fields", "design", "modes",
                        "gate",    "errors",     "evolve", "reproduce"};
  for (const char* name : subs) app.add_subcommand(name)->fallthrough();
  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    iongate::run_config cfg = opt.config_path.empty()
                                  ? iongate::run_config{}
                                  : iongate::run_config::parse_file(opt.config_path);
    if (cmd == "reproduce") return cmd_reproduce(opt);
    pipeline p(cfg);
    if (cmd == "levels") cmd_levels(p, opt);
    else if (cmd == "clockpoint") cmd_clockpoint(p, opt);
    else if (cmd == "fields") cmd_fields(p, opt);
    else if (cmd == "design") cmd_design(p, opt);
    else if (cmd == "modes") cmd_modes(p, opt);
    else if (cmd == "gate") cmd_gate(p, opt);
    else if (cmd == "errors") cmd_errors(p, opt);
    else if (cmd == "evolve") cmd_evolve(p, opt);
  } catch (const iongate::invalid_argument_error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const iongate::convergence_error& ex) {
    std::cerr << "numerical error: " << ex.what() << "\n";
    return 2;
  } catch (const iongate::error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
