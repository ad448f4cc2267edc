#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qssmm/config.hpp"

namespace qssmm {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitConfigError = 2,
  kExitSolverFailure = 3,
};

/// Command-line overrides applied on top of a RunConfig.
struct CommandOptions {
  std::optional<std::string> out_dir;
  std::optional<std::vector<double>> epsilons;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  /// Test hook for verify-tf: perturbs the closed form so the check must fail.
  bool corrupt_closed_form = false;
};

/// Each command writes CSV files under the output directory, reports on
/// `log`, and returns an ExitCode. Library errors propagate as exceptions;
/// run_command maps them to exit codes.
int cmd_simulate(const RunConfig& config, const CommandOptions& options, std::ostream& log);
int cmd_converge(const RunConfig& config, const CommandOptions& options, std::ostream& log);
int cmd_verify_tf(const RunConfig& config, const CommandOptions& options, std::ostream& log);
int cmd_project_ic(const RunConfig& config, const CommandOptions& options, std::ostream& log);

/// Loads `config_path`, dispatches on `command` and converts errors into exit
/// codes with a diagnostic on `err`.
int run_command(const std::string& command, const std::string& config_path,
                const CommandOptions& options, std::ostream& log, std::ostream& err);

}  // namespace qssmm
