#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qssmm/experiments.hpp"
#include "qssmm/initial_profiles.hpp"
#include "qssmm/integrator.hpp"
#include "qssmm/models.hpp"

namespace qssmm {

/// Contents of a run configuration file. Only `model` is required; every
/// other key defaults to the reference setup (L = 1, N = 100, unit rates,
/// d_s = d_e = 1, d_c = 2, T = 0.005).
struct RunConfig {
  ModelKind model = ModelKind::FullScaledIrrev;
  /// Reduced partner for `converge`; derived from `model` and delta if absent.
  std::optional<ModelKind> reduced_model;
  double length = 1.0;
  std::size_t cells = 100;
  RateConstants rates;
  DiffusionConstants diffusion;
  std::optional<double> epsilon;
  std::vector<double> epsilons{1.0, 1e-1, 1e-2, 1e-3, 1e-4};
  double final_time = 0.005;
  /// Snapshot times for `simulate`; empty means the final time only.
  std::vector<double> snapshots;
  InitialConditionSpec initial;
  IntegratorConfig integrator;
  std::string output_directory = "out";
  std::uint64_t seed = 1;
  std::size_t samples = 100;
  std::vector<std::size_t> verify_cells{1, 2, 5, 10};

  Grid1D grid() const { return Grid1D(length, cells); }
  ModelSpec model_spec() const;
  ModelKind reduced_partner() const;
  SweepSpec sweep_spec() const;
};

/// Parses YAML text. Unknown keys, wrong types and invalid values raise
/// ConfigError carrying the key path and line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Human-readable documentation of every key, as printed by the CLI.
std::string config_schema();

}  // namespace qssmm
