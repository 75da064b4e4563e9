#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <spdlog/spdlog.h>

#include "llb/config.hpp"
#include "llb/diagnostics.hpp"
#include "llb/output.hpp"
#include "llb/scheme.hpp"
#include "llb/studies.hpp"
#include "llb/toml_lite.hpp"
#include "llb/verification.hpp"

namespace llb::cli {

namespace {

namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::string out = "./out";
  bool quiet = false;
};

class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_energy_csv(const EnergyMonitor& monitor, double k, const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw OutputError("cannot open '" + path.string() + "' for writing");
  f << "step,t,relative_residual,stability_margin\n";
  const auto& rel = monitor.relative_residuals();
  const auto& stab = monitor.stability_margins();
  for (std::size_t j = 0; j < rel.size(); ++j)
    f << j + 1 << ',' << format_number(k * static_cast<double>(j + 1)) << ',' << format_number(rel[j]) << ','
      << format_number(stab[j]) << '\n';
  if (!f) throw OutputError("write to '" + path.string() + "' failed");
}

std::string rate_text(const std::optional<double>& r) { return r ? format_number(std::round(*r * 1000) / 1000) : "n/a"; }

void print_study(std::ostream& out, const StudyResult& r) {
  out << "axis " << to_string(r.table.axis) << "\n";
  for (const ErrorLevel& l : r.table.levels)
    out << "  " << l.parameter << "  L2 " << l.l2 << "  H1 " << l.h1 << "  Linf " << l.linf << "\n";
  out << "rates (mean of last two): L2 " << rate_text(r.rates.l2.summary) << ", H1 " << rate_text(r.rates.h1.summary)
      << ", Linf " << rate_text(r.rates.linf.summary) << "\n";
}

const StudyConfig& study_block(const RunConfig& c, StudyAxis axis) {
  if (!c.study) throw ConfigError("study", "missing [study] table");
  if (c.study->axis && *c.study->axis != axis)
    throw ConfigError("study.axis", "is '" + to_string(*c.study->axis) + "' but the subcommand runs a " +
                                        to_string(axis) + " study");
  return *c.study;
}

Trajectory simulate(const RunConfig& c, const Flags& flags, std::ostream& out, bool write_fields) {
  auto mesh = std::make_shared<const Mesh>(make_mesh(c.domain, c.n));
  EnergyMonitor monitor(c.params, c.time.step());
  StepObserver* observers[] = {&monitor};
  RunOptions options;
  options.snapshot_stride = write_fields && c.output.vtk ? c.output.snapshot_stride : 0;
  options.solver = c.solver;
  if (!flags.quiet)
    out << "running " << to_string(c.domain) << " n=" << c.n << " (" << mesh->num_vertices() << " vertices), N="
        << c.time.N << ", T=" << c.time.T << "\n";
  Trajectory traj = run(mesh, c.params, c.time, c.initial_field(), observers, options);

  const fs::path dir(flags.out);
  write_csv(traj.norms, dir / c.output.norms_csv);
  write_energy_csv(monitor, c.time.step(), dir / c.output.energy_csv);
  if (write_fields && c.output.vtk) {
    for (const Snapshot& s : traj.snapshots) {
      char name[32];
      std::snprintf(name, sizeof name, "u_%05d.vtk", s.step);
      write_vtk(*mesh, s.u, dir / name);
    }
  }
  if (!flags.quiet) {
    out << "final L2 " << traj.norms.back().l2 << ", H1 " << traj.norms.back().h1 << ", Linf "
        << traj.norms.back().linf << "\n";
    out << "max relative energy residual " << monitor.max_relative_residual() << "\n";
    out << "total GMRES iterations " << traj.total_solver_iterations << "\n";
  }
  return traj;
}

int cmd_simulate(const RunConfig& c, const Flags& f, std::ostream& out) {
  simulate(c, f, out, true);
  return ok;
}

int cmd_decay(const RunConfig& c, const Flags& f, std::ostream& out) {
  const Trajectory traj = simulate(c, f, out, false);
  const auto margins = decay_report(traj, c.params, c.time.step());
  const auto linf = linf_decay_monitor(traj, c.params);
  const fs::path dir(f.out);
  write_csv(std::span<const DecayMargin>(margins), dir / c.output.decay_csv);
  write_csv(std::span<const LinfSample>(linf), dir / c.output.linf_csv);
  double worst = 0.0;
  for (const DecayMargin& m : margins) worst = std::min(worst, m.margin);
  const double scale = std::max(1.0, margins.empty() ? 1.0 : margins.front().energy);
  if (!f.quiet) out << "lambda " << decay_rate(c.params, c.time.step()) << ", worst decay margin " << worst << "\n";
  if (worst < -1e-10 * scale) throw VerificationFailure("decay envelope violated (worst margin " + format_number(worst) + ")");
  return ok;
}

int cmd_h_study(const RunConfig& c, const Flags& f, std::ostream& out) {
  const StudyConfig& s = study_block(c, StudyAxis::h);
  const StudyResult r = h_study(make_mesh(c.domain, c.n), s.levels, c.params, c.time, c.initial_field(), c.solver);
  write_csv(r.table, fs::path(f.out) / c.output.table_csv);
  if (!f.quiet) print_study(out, r);
  return ok;
}

int cmd_k_study(const RunConfig& c, const Flags& f, std::ostream& out) {
  const StudyConfig& s = study_block(c, StudyAxis::k);
  if (s.n_sequence.size() < 3) throw ConfigError("study.n_sequence", "k study needs at least three step counts");
  const StudyResult r = k_study(make_mesh(c.domain, c.n), c.params, c.time.T, s.n_sequence, c.initial_field(), c.solver);
  write_csv(r.table, fs::path(f.out) / c.output.table_csv);
  if (!f.quiet) print_study(out, r);
  return ok;
}

int cmd_eps_study(const RunConfig& c, const Flags& f, std::ostream& out) {
  const StudyConfig& s = study_block(c, StudyAxis::eps);
  if (s.eps_sequence.size() < 3) throw ConfigError("study.eps_sequence", "eps study needs at least three values");
  const StudyResult r =
      eps_study(make_mesh(c.domain, c.n), c.params, c.time, c.initial_field(), s.eps_sequence, c.solver);
  write_csv(r.table, fs::path(f.out) / c.output.table_csv);
  if (!f.quiet) print_study(out, r);
  return ok;
}

int cmd_verify(const std::optional<RunConfig>& c, const Flags& f, std::ostream& out) {
  MmsConfig mms;
  if (c) mms.solver = c->solver;
  std::vector<OracleReport> reports = oracle_suite();
  for (OracleReport& r : manufactured_suite(mms)) reports.push_back(std::move(r));
  bool all = true;
  for (const OracleReport& r : reports) {
    all = all && r.pass;
    if (!f.quiet || !r.pass)
      out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.max_abs_discrepancy << " <= " << r.threshold << "\n";
  }
  if (!all) throw VerificationFailure("verification failed");
  return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite element solver for the Landau-Lifshitz-Bloch equation", "llb"};
  app.require_subcommand(1);
  Flags flags;
  auto add_flags = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", flags.config, "TOML run configuration");
    if (config_required) opt->required();
    sub->add_option("--out", flags.out, "output directory")->capture_default_str();
    sub->add_flag("--quiet", flags.quiet, "only print warnings and errors");
  };
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "run the scheme, write norms, energy and VTK snapshots");
  CLI::App* h_cmd = app.add_subcommand("h-study", "spatial convergence study on nested meshes");
  CLI::App* k_cmd = app.add_subcommand("k-study", "temporal convergence study on one mesh");
  CLI::App* eps_cmd = app.add_subcommand("eps-study", "convergence as epsilon -> 0");
  CLI::App* decay_cmd = app.add_subcommand("decay", "check the discrete exponential decay");
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the dense-oracle and manufactured-solution suites");
  for (CLI::App* sub : {simulate_cmd, h_cmd, k_cmd, eps_cmd, decay_cmd}) add_flags(sub, true);
  add_flags(verify_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return config_error;
  }

  const auto previous_level = spdlog::get_level();
  if (flags.quiet) spdlog::set_level(spdlog::level::warn);
  struct RestoreLevel {
    spdlog::level::level_enum level;
    ~RestoreLevel() { spdlog::set_level(level); }
  } restore{previous_level};

  try {
    std::optional<RunConfig> config;
    if (!flags.config.empty()) config = load_config(flags.config);
    if (verify_cmd->parsed()) return cmd_verify(config, flags, out);
    if (simulate_cmd->parsed()) return cmd_simulate(*config, flags, out);
    if (h_cmd->parsed()) return cmd_h_study(*config, flags, out);
    if (k_cmd->parsed()) return cmd_k_study(*config, flags, out);
    if (eps_cmd->parsed()) return cmd_eps_study(*config, flags, out);
    if (decay_cmd->parsed()) return cmd_decay(*config, flags, out);
    err << app.help();
    return config_error;
  } catch (const toml::ParseError& e) {
    err << "config error: " << flags.config << ": " << e.what() << "\n";
    return config_error;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const StepError& e) {
    err << "solver failure: " << e.what() << "\n";
    return solver_failure;
  } catch (const SolveError& e) {
    err << "solver failure: " << e.what() << "\n";
    return solver_failure;
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return verification_failed;
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << "\n";
    return config_error;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return config_error;
  }
}

}  // namespace llb::cli
