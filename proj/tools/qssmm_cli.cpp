// Command-line front end: simulate, converge, verify-tf, project-ic.
#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "qssmm/commands.hpp"
#include "qssmm/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Michaelis-Menten reaction-diffusion: full vs quasi-steady-state reduced models"};
  app.require_subcommand(1);
  app.footer("Config keys:\n" + qssmm::config_schema());

  std::string config_path;
  std::string out_dir;
  std::vector<double> epsilons;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  bool corrupt = false;

  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "integrate one model and write snapshot CSVs"},
      {"converge", "full vs reduced error sweep over epsilon with fitted orders"},
      {"verify-tf", "check generic TF reduction against the closed-form reduced fields"},
      {"project-ic", "place the initial complex on the slow manifold"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "YAML run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--epsilon", epsilons, "epsilon value(s), comma separated")->delimiter(',');
    sub->add_option("--seed", seed, "seed for randomized checks");
    sub->add_option("--jobs", jobs, "worker threads for converge")->check(CLI::PositiveNumber);
    sub->add_flag("--corrupt-closed-form", corrupt, "test hook for verify-tf")->group("");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qssmm::kExitConfigError;
  }

  qssmm::CommandOptions opts;
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--out")) opts.out_dir = out_dir;
    if (sub->count("--epsilon")) opts.epsilons = epsilons;
    if (sub->count("--seed")) opts.seed = seed;
    opts.jobs = jobs;
    opts.corrupt_closed_form = corrupt;
    return qssmm::run_command(sub->get_name(), config_path, opts, std::cout, std::cerr);
  }
  return qssmm::kExitConfigError;
}
