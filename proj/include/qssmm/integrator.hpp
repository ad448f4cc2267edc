#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qssmm/band_matrix.hpp"
#include "qssmm/ode_system.hpp"

namespace qssmm {

struct IntegratorConfig {
  double abs_tol = 1e-14;
  double rel_tol = 1e-10;
  /// Zero selects a starting step automatically.
  double initial_step = 0.0;
  /// Zero means the whole interval.
  double max_step = 0.0;
  int max_newton_iters = 10;
  /// Newton stopping threshold relative to the weighted error norm (1 = tolerance).
  double newton_tol = 0.03;
  /// When false, steps of exactly `initial_step` are taken (clipped at the end).
  bool adaptive = true;
  std::size_t max_steps = 10'000'000;
  /// Keep the state at every accepted step, not only at stop times.
  bool store_all_steps = false;

  /// Throws ConfigError. `final_time` is used for the max_step bound.
  void validate(double final_time) const;
};

struct SolverStats {
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t newton_iterations = 0;
  std::size_t newton_failures = 0;
  std::size_t jacobian_evaluations = 0;
  std::size_t factorizations = 0;
  std::size_t rhs_evaluations = 0;
  double min_step = 0.0;
  double max_step = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  SolverStats stats;

  const std::vector<double>& final_state() const { return states.back(); }
};

/// Integrates y' = f(y) from t = 0 to `final_time` with TR-BDF2 (trapezoidal
/// stage to 2 - sqrt(2) of the step, then BDF2), an L-stable second-order
/// one-step scheme with an embedded error estimate.
///
/// The trajectory holds t = 0, every time in `stop_times` that lies in
/// (0, final_time), and final_time. All of them are hit exactly by clipping.
Trajectory integrate(const OdeSystem& system, std::span<const double> y0, double final_time,
                     const IntegratorConfig& config = {},
                     std::span<const double> stop_times = {});

using RhsFunction = std::function<void(std::span<const double>, std::span<double>)>;

/// Convenience overload with a dense finite-difference Jacobian.
Trajectory integrate(const RhsFunction& rhs, std::span<const double> y0, double final_time,
                     const IntegratorConfig& config = {});

enum class NewtonStatus { Converged, MaxIterations, Diverged, Singular, NonFinite };

struct NewtonOptions {
  double tol = 1e-10;  ///< on the max norm of the residual
  int max_iterations = 20;
  /// Refactor the Jacobian when the contraction ratio exceeds this.
  double refactor_ratio = 0.1;
};

struct NewtonResult {
  std::vector<double> x;
  NewtonStatus status = NewtonStatus::MaxIterations;
  int iterations = 0;
  int factorizations = 0;
  double residual_norm = 0.0;

  bool converged() const noexcept { return status == NewtonStatus::Converged; }
};

using ResidualFunction = std::function<void(std::span<const double>, std::span<double>)>;
using BandJacobianFunction = std::function<void(std::span<const double>, BandMatrix&)>;

/// Solves F(x) = 0 with a banded Newton iteration. The factorization is reused
/// while the residual keeps contracting fast. Without `jacobian` a grouped
/// finite-difference approximation is used.
NewtonResult newton_solve(const ResidualFunction& residual, std::size_t n, std::size_t lower,
                          std::size_t upper, std::span<const double> guess,
                          const NewtonOptions& options = {},
                          const BandJacobianFunction& jacobian = {});

}  // namespace qssmm
