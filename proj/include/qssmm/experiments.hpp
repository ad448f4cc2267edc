#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qssmm/grid.hpp"
#include "qssmm/initial_profiles.hpp"
#include "qssmm/integrator.hpp"
#include "qssmm/models.hpp"
#include "qssmm/systems.hpp"

namespace qssmm {

/// Full-versus-reduced comparison over a list of epsilon values.
struct SweepSpec {
  std::vector<double> epsilons{1.0, 1e-1, 1e-2, 1e-3, 1e-4};
  ModelKind full_kind = ModelKind::FullScaledIrrev;
  ModelKind reduced_kind = ModelKind::ReducedIrrevBigDelta;
  RateConstants rates;
  DiffusionConstants diffusion;
  double length = 1.0;
  std::size_t cells = 100;
  InitialConditionSpec initial;
  double final_time = 0.005;
  IntegratorConfig integrator;

  /// Throws ConfigError for nonpositive epsilons or an inconsistent model pair.
  void validate() const;
  Grid1D grid() const { return Grid1D(length, cells); }
};

/// Measurements on a trajectory of a full scaled model.
struct MonitorReport {
  double min_component = 0.0;
  /// max_t |sum y*(t) - sum y*(0)| / |sum y*(0)|
  double y_sum_drift = 0.0;
  /// Same for sum(s + e + 2c + p) = sum(s + eps (y* + c*) + p); reversible only.
  std::optional<double> mass_drift;
  double max_y_star = 0.0;
  double initial_max_y_star = 0.0;
  /// |c* - manifold(s, y*, p)|_inf at the final time; absent when rates vanish.
  std::optional<double> manifold_distance;
};

MonitorReport monitor_invariants(const Trajectory& trajectory, const MethodOfLinesSystem& system);

/// Final-time L-infinity errors between the full and the reduced solution.
struct ErrorRecord {
  double epsilon = 0.0;
  double err_s = 0.0;
  double err_cstar = 0.0;
  double err_ystar = 0.0;
  std::optional<double> err_p;
  bool ok = false;
  std::string diagnostic;
  SolverStats full_stats;
  MonitorReport monitors;
};

/// Reduced solution at the final time; shared by all epsilon values.
struct ReducedRun {
  ReducedState final_state;
  Field c_manifold;
  SolverStats stats;
};

ReducedRun run_reduced(const SweepSpec& spec);

/// Integrates the full model from the raw profile and compares with `reduced`
/// (computed here when absent). Integrator failures are reported in the record.
ErrorRecord run_comparison(const SweepSpec& spec, double epsilon,
                           const ReducedRun* reduced = nullptr);

struct ConvergenceReport {
  std::vector<ErrorRecord> records;  ///< ordered like SweepSpec::epsilons
  std::optional<double> slope_s;
  std::optional<double> slope_cstar;
  std::optional<double> slope_ystar;
  std::optional<double> slope_p;
  std::optional<double> slope_manifold;
  SolverStats reduced_stats;
  /// How errors are aggregated in space and time.
  std::string error_norm = "linf_space_final_time";
};

/// Errors at or below this are solver noise and excluded from fits.
inline constexpr double kErrorFloor = 1e-13;

/// Least-squares slope of log(err) against log(eps) over points with
/// err > kErrorFloor; empty with fewer than three such points.
std::optional<double> fit_convergence_order(std::span<const double> epsilons,
                                            std::span<const double> errors);

/// Runs every epsilon (on up to `jobs` threads) and fits the slopes.
ConvergenceReport run_sweep(const SweepSpec& spec, unsigned jobs = 1);

}  // namespace qssmm
