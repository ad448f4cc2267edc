#include "qssmm/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "qssmm/csv.hpp"
#include "qssmm/errors.hpp"
#include "qssmm/experiments.hpp"
#include "qssmm/systems.hpp"
#include "qssmm/tf_reduction.hpp"

namespace qssmm {
namespace {

constexpr double kVerifyTolerance = 1e-9;
constexpr double kProjectionTolerance = 1e-10;
constexpr double kCorruption = 1e-6;

std::filesystem::path output_dir(const RunConfig& config, const CommandOptions& options) {
  std::filesystem::path dir = options.out_dir.value_or(config.output_directory);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "'", "output.directory");
  return dir;
}

std::string stats_line(const SolverStats& s) {
  std::ostringstream os;
  os << "steps=" << s.steps << " rejected=" << s.rejected_steps
     << " newton_iterations=" << s.newton_iterations << " newton_failures=" << s.newton_failures
     << " jacobians=" << s.jacobian_evaluations << " rhs_evaluations=" << s.rhs_evaluations;
  return os.str();
}

std::string slope_text(const std::optional<double>& slope) {
  return slope ? format_double(*slope) : "undefined";
}

}  // namespace

int cmd_simulate(const RunConfig& config_in, const CommandOptions& options, std::ostream& log) {
  RunConfig config = config_in;
  if (options.epsilons) {
    if (options.epsilons->size() != 1) {
      throw ConfigError("simulate takes a single --epsilon value", "epsilon");
    }
    config.epsilon = options.epsilons->front();
  }
  const ModelSpec spec = config.model_spec();
  if (is_homogeneous(spec.kind)) {
    throw ConfigError("simulate needs a spatial model, got " + std::string(to_string(spec.kind)),
                      "model");
  }
  const Grid1D grid = config.grid();
  const bool reversible = is_reversible(spec.kind);
  const FullState raw = build_initial_profiles(config.initial, grid, reversible);
  MethodOfLinesSystem sys(spec, grid);

  std::vector<double> y0;
  if (is_full(spec.kind)) {
    y0 = sys.pack(raw);
  } else if (is_reduced(spec.kind)) {
    y0 = sys.pack(project_initial_values(raw, spec.rates).reduced);
  } else {
    // Free enzyme from the raw profiles; p from the profile or zero.
    SlowComplexState sc{raw.s, Field(grid.cell_count()), Field(grid.cell_count(), 0.0)};
    for (std::size_t a = 0; a < grid.cell_count(); ++a) {
      sc.e[a] = raw.y_star[a] - raw.c_star[a];
      if (reversible) sc.p[a] = raw.p[a];
    }
    y0 = sys.pack(sc);
  }

  std::vector<double> snaps = config.snapshots;
  if (snaps.empty()) snaps.push_back(config.final_time);
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());

  const Trajectory traj = integrate(sys, y0, config.final_time, config.integrator, snaps);
  log << "simulate " << to_string(spec.kind) << ": " << stats_line(traj.stats) << "\n";

  const auto dir = output_dir(config, options);
  const auto centers = grid.centers();
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    const auto it = std::find(traj.times.begin(), traj.times.end(), snaps[k]);
    const auto& y = traj.states[static_cast<std::size_t>(it - traj.times.begin())];
    CsvTable table;
    table.preamble.push_back("model=" + std::string(to_string(spec.kind)));
    table.preamble.push_back("t=" + format_double(snaps[k]));
    if (spec.epsilon) table.preamble.push_back("epsilon=" + format_double(*spec.epsilon));

    std::vector<Field> cols;
    if (is_full(spec.kind)) {
      const FullState st = sys.unpack_full(y);
      table.header = {"x", "s", "c_star", "y_star"};
      cols = {st.s, st.c_star, st.y_star};
      if (reversible) {
        table.header.push_back("p");
        cols.push_back(st.p);
      }
    } else if (is_reduced(spec.kind)) {
      const ReducedState st = sys.unpack_reduced(y);
      table.header = {"x", "s", "c_star", "y_star"};
      cols = {st.s, slow_manifold_c(st.s, st.y_star, st.p, spec.rates), st.y_star};
      if (reversible) {
        table.header.push_back("p");
        cols.push_back(st.p);
      }
    } else {
      const SlowComplexState st = sys.unpack_slow_complex(y);
      table.header = {"x", "s", "e", "p"};
      cols = {st.s, st.e, st.p};
    }
    for (std::size_t a = 0; a < grid.cell_count(); ++a) {
      std::vector<double> row{centers[a]};
      for (const auto& c : cols) row.push_back(c[a]);
      table.rows.push_back(std::move(row));
    }
    const auto path = dir / ("snapshot_" + std::to_string(k) + ".csv");
    write_csv(path.string(), table);
    log << "wrote " << path.string() << "\n";
  }
  return kExitOk;
}

int cmd_converge(const RunConfig& config_in, const CommandOptions& options, std::ostream& log) {
  RunConfig config = config_in;
  if (options.epsilons) config.epsilons = *options.epsilons;
  const SweepSpec sweep = config.sweep_spec();
  const ConvergenceReport report = run_sweep(sweep, options.jobs);
  const bool reversible = is_reversible(sweep.full_kind);

  CsvTable table;
  table.preamble.push_back("full_model=" + std::string(to_string(sweep.full_kind)));
  table.preamble.push_back("reduced_model=" + std::string(to_string(sweep.reduced_kind)));
  table.preamble.push_back("error_norm=" + report.error_norm);
  table.header = {"epsilon", "err_s", "err_cstar", "err_ystar"};
  if (reversible) table.header.push_back("err_p");

  CsvTable monitors;
  monitors.header = {"epsilon",    "min_component", "y_sum_drift", "mass_drift",
                     "max_y_star", "manifold_distance", "steps",   "rejected_steps"};

  bool failed = false;
  std::size_t usable = 0;
  const double nan = std::nan("");
  for (const auto& r : report.records) {
    if (!r.ok) {
      failed = true;
      table.trailer.push_back("failed epsilon=" + format_double(r.epsilon) + ": " + r.diagnostic);
      log << "epsilon " << r.epsilon << " failed: " << r.diagnostic << "\n";
    } else {
      ++usable;
      log << "epsilon " << r.epsilon << ": " << stats_line(r.full_stats) << "\n";
    }
    std::vector<double> row{r.epsilon, r.ok ? r.err_s : nan, r.ok ? r.err_cstar : nan,
                            r.ok ? r.err_ystar : nan};
    if (reversible) row.push_back(r.ok ? r.err_p.value_or(nan) : nan);
    table.rows.push_back(std::move(row));
    const auto& m = r.monitors;
    monitors.rows.push_back({r.epsilon, r.ok ? m.min_component : nan, r.ok ? m.y_sum_drift : nan,
                             m.mass_drift.value_or(nan), r.ok ? m.max_y_star : nan,
                             m.manifold_distance.value_or(nan),
                             static_cast<double>(r.full_stats.steps),
                             static_cast<double>(r.full_stats.rejected_steps)});
  }
  if (usable >= 3) {
    std::string trailer = "slope_s=" + slope_text(report.slope_s) +
                          ",slope_cstar=" + slope_text(report.slope_cstar) +
                          ",slope_ystar=" + slope_text(report.slope_ystar);
    if (reversible) trailer += ",slope_p=" + slope_text(report.slope_p);
    table.trailer.insert(table.trailer.begin(), trailer);
    monitors.trailer.push_back("slope_manifold_distance=" + slope_text(report.slope_manifold));
    log << trailer << "\n";
  }

  const auto dir = output_dir(config, options);
  write_csv((dir / "convergence.csv").string(), table);
  write_csv((dir / "monitors.csv").string(), monitors);
  log << "wrote " << (dir / "convergence.csv").string() << "\n";
  return failed ? kExitSolverFailure : kExitOk;
}

int cmd_verify_tf(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  std::vector<ModelKind> kinds;
  if (is_reduced(config.model)) {
    kinds.push_back(config.model);
  } else {
    if (config.rates.irreversible()) {
      kinds.push_back(ModelKind::ReducedIrrevSmallDelta);
      kinds.push_back(ModelKind::ReducedIrrevBigDelta);
    }
    kinds.push_back(ModelKind::ReducedRevSmallDelta);
    kinds.push_back(ModelKind::ReducedRevBigDelta);
  }
  TfOracleOptions opt;
  opt.samples = config.samples;
  opt.seed = options.seed.value_or(config.seed);
  opt.closed_form_perturbation = options.corrupt_closed_form ? kCorruption : 0.0;

  CsvTable table;
  table.header = {"variant",          "cells",  "samples", "max_deviation", "max_projection_defect",
                  "max_tangency_defect", "min_spectral_gap", "spectral_ok"};
  table.preamble.push_back("seed=" + std::to_string(opt.seed));
  bool pass = true;
  double worst = 0.0;
  for (std::size_t v = 0; v < kinds.size(); ++v) {
    table.preamble.push_back("variant " + std::to_string(v) + "=" + std::string(to_string(kinds[v])));
    for (std::size_t cells : config.verify_cells) {
      const Grid1D grid(config.length, cells);
      const auto rep = run_tf_oracle(kinds[v], grid, config.rates, config.diffusion, opt, cells <= 10);
      const bool ok = rep.max_deviation <= kVerifyTolerance && rep.spectral_ok &&
                      rep.max_projection_defect <= kProjectionTolerance;
      pass = pass && ok;
      worst = std::max(worst, rep.max_deviation);
      log << to_string(kinds[v]) << " N=" << cells << " max_deviation="
          << format_double(rep.max_deviation) << (ok ? " ok" : " FAIL") << "\n";
      table.rows.push_back({static_cast<double>(v), static_cast<double>(cells),
                            static_cast<double>(rep.samples), rep.max_deviation,
                            rep.max_projection_defect, rep.max_tangency_defect,
                            rep.min_spectral_gap, rep.spectral_ok ? 1.0 : 0.0});
    }
  }
  table.trailer.push_back("max_deviation=" + format_double(worst) + (pass ? " pass" : " fail"));
  log << "max relative deviation " << format_double(worst) << (pass ? " (pass)" : " (FAIL)") << "\n";
  const auto dir = output_dir(config, options);
  write_csv((dir / "verify_tf.csv").string(), table);
  return pass ? kExitOk : kExitVerificationFailed;
}

int cmd_project_ic(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
  const Grid1D grid = config.grid();
  const bool reversible = is_reversible(config.model);
  config.rates.validate_for_manifold();
  const FullState raw = build_initial_profiles(config.initial, grid, reversible);
  const ProjectedInitialValues proj = project_initial_values(raw, config.rates);

  CsvTable table;
  table.preamble.push_back("model=" + std::string(to_string(config.model)));
  table.header = {"x", "s_raw", "c_star_raw", "y_star_raw"};
  if (reversible) table.header.push_back("p_raw");
  for (const char* h : {"s", "y_star", "c_star"}) table.header.push_back(h);
  if (reversible) table.header.push_back("p");
  const auto centers = grid.centers();
  for (std::size_t a = 0; a < grid.cell_count(); ++a) {
    std::vector<double> row{centers[a], raw.s[a], raw.c_star[a], raw.y_star[a]};
    if (reversible) row.push_back(raw.p[a]);
    row.push_back(proj.reduced.s[a]);
    row.push_back(proj.reduced.y_star[a]);
    row.push_back(proj.c_star[a]);
    if (reversible) row.push_back(proj.reduced.p[a]);
    table.rows.push_back(std::move(row));
  }
  const auto dir = output_dir(config, options);
  write_csv((dir / "project_ic.csv").string(), table);
  log << "wrote " << (dir / "project_ic.csv").string() << "\n";
  return kExitOk;
}

int run_command(const std::string& command, const std::string& config_path,
                const CommandOptions& options, std::ostream& log, std::ostream& err) {
  try {
    const RunConfig config = load_config(config_path);
    if (command == "simulate") return cmd_simulate(config, options, log);
    if (command == "converge") return cmd_converge(config, options, log);
    if (command == "verify-tf") return cmd_verify_tf(config, options, log);
    if (command == "project-ic") return cmd_project_ic(config, options, log);
    err << "error: unknown command '" << command << "'\n";
    return kExitConfigError;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const DimensionError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitSolverFailure;
  }
}

}  // namespace qssmm
