#include "qssmm/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qssmm/errors.hpp"

namespace qssmm {
namespace {

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

[[noreturn]] void fail(const std::string& field, const YAML::Node& node, const std::string& what) {
  const int line = line_of(node);
  std::ostringstream os;
  os << "config";
  if (line > 0) os << " line " << line;
  os << ": " << field << ": " << what;
  throw ConfigError(os.str(), field, line);
}

void check_keys(const YAML::Node& map, const std::string& path, const std::set<std::string>& allowed) {
  if (!map.IsMap()) fail(path.empty() ? "<root>" : path, map, "expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      fail(path.empty() ? key : path + "." + key, kv.first, "unknown key");
    }
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) fail(field, node, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(field, node, "invalid value '" + node.Scalar() + "'");
  }
}

double number(const YAML::Node& node, const std::string& field) {
  const double v = scalar<double>(node, field);
  if (!std::isfinite(v)) fail(field, node, "must be finite");
  return v;
}

double nonnegative(const YAML::Node& node, const std::string& field) {
  const double v = number(node, field);
  if (v < 0.0) fail(field, node, "must be nonnegative");
  return v;
}

double positive(const YAML::Node& node, const std::string& field) {
  const double v = number(node, field);
  if (!(v > 0.0)) fail(field, node, "must be positive");
  return v;
}

std::vector<double> number_list(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence()) fail(field, node, "expected a list");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(number(node[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

ModelKind model_kind(const YAML::Node& node, const std::string& field) {
  const auto name = scalar<std::string>(node, field);
  const auto kind = parse_model_kind(name);
  if (!kind) fail(field, node, "unknown model '" + name + "'");
  return *kind;
}

void read_rates(const YAML::Node& n, RateConstants& r) {
  check_keys(n, "rates", {"k1", "k_m1", "k2", "k_m2"});
  if (n["k1"]) r.k1 = nonnegative(n["k1"], "rates.k1");
  if (n["k_m1"]) r.k_m1 = nonnegative(n["k_m1"], "rates.k_m1");
  if (n["k2"]) r.k2 = nonnegative(n["k2"], "rates.k2");
  if (n["k_m2"]) r.k_m2 = nonnegative(n["k_m2"], "rates.k_m2");
}

void read_diffusion(const YAML::Node& n, DiffusionConstants& d) {
  check_keys(n, "diffusion", {"s", "e", "c", "p"});
  if (n["s"]) d.d_s = nonnegative(n["s"], "diffusion.s");
  if (n["e"]) d.d_e = nonnegative(n["e"], "diffusion.e");
  if (n["c"]) d.d_c = nonnegative(n["c"], "diffusion.c");
  if (n["p"]) d.d_p = nonnegative(n["p"], "diffusion.p");
}

void read_initial(const YAML::Node& n, InitialConditionSpec& ic) {
  struct Key {
    const char* name;
    double InitialConditionSpec::*member;
  };
  static const Key keys[] = {
      {"s_low", &InitialConditionSpec::s_low},
      {"s_high", &InitialConditionSpec::s_high},
      {"step_position", &InitialConditionSpec::step_position},
      {"c_amplitude", &InitialConditionSpec::c_amplitude},
      {"c_offset", &InitialConditionSpec::c_offset},
      {"y_amplitude", &InitialConditionSpec::y_amplitude},
      {"y_offset", &InitialConditionSpec::y_offset},
      {"bump_amplitude", &InitialConditionSpec::bump_amplitude},
      {"bump_center", &InitialConditionSpec::bump_center},
      {"bump_width", &InitialConditionSpec::bump_width},
      {"p_value", &InitialConditionSpec::p_value},
  };
  std::set<std::string> allowed;
  for (const auto& k : keys) allowed.insert(k.name);
  check_keys(n, "initial_condition", allowed);
  for (const auto& k : keys) {
    if (n[k.name]) ic.*k.member = number(n[k.name], std::string("initial_condition.") + k.name);
  }
}

void read_integrator(const YAML::Node& n, IntegratorConfig& c) {
  check_keys(n, "integrator",
             {"abs_tol", "rel_tol", "initial_step", "max_step", "max_newton_iters", "newton_tol",
              "max_steps"});
  if (n["abs_tol"]) c.abs_tol = positive(n["abs_tol"], "integrator.abs_tol");
  if (n["rel_tol"]) c.rel_tol = positive(n["rel_tol"], "integrator.rel_tol");
  if (n["initial_step"]) c.initial_step = nonnegative(n["initial_step"], "integrator.initial_step");
  if (n["max_step"]) c.max_step = nonnegative(n["max_step"], "integrator.max_step");
  if (n["max_newton_iters"]) {
    c.max_newton_iters = scalar<int>(n["max_newton_iters"], "integrator.max_newton_iters");
  }
  if (n["newton_tol"]) c.newton_tol = positive(n["newton_tol"], "integrator.newton_tol");
  if (n["max_steps"]) c.max_steps = scalar<std::size_t>(n["max_steps"], "integrator.max_steps");
}

RunConfig from_yaml(const YAML::Node& root) {
  if (!root || root.IsNull()) throw ConfigError("config: missing required field 'model'", "model");
  check_keys(root, "",
             {"model", "reduced_model", "grid", "rates", "diffusion", "epsilon", "epsilons",
              "final_time", "snapshots", "initial_condition", "integrator", "output", "seed",
              "samples", "verify_cells"});
  RunConfig cfg;
  if (!root["model"]) {
    throw ConfigError("config: missing required field 'model'", "model", line_of(root));
  }
  cfg.model = model_kind(root["model"], "model");
  if (root["reduced_model"]) cfg.reduced_model = model_kind(root["reduced_model"], "reduced_model");

  if (const auto g = root["grid"]) {
    check_keys(g, "grid", {"length", "cells"});
    if (g["length"]) cfg.length = positive(g["length"], "grid.length");
    if (g["cells"]) {
      const auto cells = scalar<long long>(g["cells"], "grid.cells");
      if (cells < 1) fail("grid.cells", g["cells"], "must be at least 1");
      cfg.cells = static_cast<std::size_t>(cells);
    }
  }
  if (root["rates"]) read_rates(root["rates"], cfg.rates);
  if (root["diffusion"]) read_diffusion(root["diffusion"], cfg.diffusion);
  if (root["epsilon"]) cfg.epsilon = positive(root["epsilon"], "epsilon");
  if (root["epsilons"]) {
    cfg.epsilons = number_list(root["epsilons"], "epsilons");
    if (cfg.epsilons.empty()) fail("epsilons", root["epsilons"], "must not be empty");
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
      if (!(cfg.epsilons[i] > 0.0)) fail("epsilons", root["epsilons"][i], "must be positive");
    }
  }
  if (root["final_time"]) cfg.final_time = positive(root["final_time"], "final_time");
  if (root["snapshots"]) {
    cfg.snapshots = number_list(root["snapshots"], "snapshots");
    for (std::size_t i = 0; i < cfg.snapshots.size(); ++i) {
      if (cfg.snapshots[i] < 0.0 || cfg.snapshots[i] > cfg.final_time) {
        fail("snapshots", root["snapshots"][i], "must lie in [0, final_time]");
      }
    }
  }
  if (root["initial_condition"]) read_initial(root["initial_condition"], cfg.initial);
  if (root["integrator"]) read_integrator(root["integrator"], cfg.integrator);
  if (const auto o = root["output"]) {
    check_keys(o, "output", {"directory"});
    if (o["directory"]) cfg.output_directory = scalar<std::string>(o["directory"], "output.directory");
  }
  if (root["seed"]) cfg.seed = scalar<std::uint64_t>(root["seed"], "seed");
  if (root["samples"]) {
    const auto s = scalar<long long>(root["samples"], "samples");
    if (s < 1) fail("samples", root["samples"], "must be at least 1");
    cfg.samples = static_cast<std::size_t>(s);
  }
  if (const auto v = root["verify_cells"]) {
    if (!v.IsSequence() || v.size() == 0) fail("verify_cells", v, "expected a non-empty list");
    cfg.verify_cells.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto c = scalar<long long>(v[i], "verify_cells");
      if (c < 1) fail("verify_cells", v[i], "must be at least 1");
      cfg.verify_cells.push_back(static_cast<std::size_t>(c));
    }
  }

  // Cross-field checks.
  try {
    cfg.rates.validate();
    cfg.diffusion.validate();
    cfg.initial.validate();
    cfg.integrator.validate(cfg.final_time);
  } catch (const ConfigError& e) {
    const std::string f = e.field();
    int line = 0;
    const auto dot = f.find('.');
    if (const auto sect = root[f.substr(0, dot)]) {
      line = line_of(sect);
      if (dot != std::string::npos && sect.IsMap() && sect[f.substr(dot + 1)]) {
        line = line_of(sect[f.substr(dot + 1)]);
      }
    }
    std::ostringstream os;
    os << "config";
    if (line > 0) os << " line " << line;
    os << ": " << f << ": " << e.what();
    throw ConfigError(os.str(), f, line);
  }
  return cfg;
}

}  // namespace

ModelSpec RunConfig::model_spec() const {
  ModelSpec spec{model, rates, diffusion, needs_epsilon(model) ? epsilon : std::nullopt};
  if (needs_epsilon(model) && !epsilon) {
    throw ConfigError("config: missing required field 'epsilon' for model " +
                          std::string(to_string(model)),
                      "epsilon");
  }
  spec.validate();
  return spec;
}

ModelKind RunConfig::reduced_partner() const {
  if (reduced_model) return *reduced_model;
  const bool small = diffusion.delta() == 0.0;
  switch (model) {
    case ModelKind::FullScaledIrrev:
      return small ? ModelKind::ReducedIrrevSmallDelta : ModelKind::ReducedIrrevBigDelta;
    case ModelKind::FullScaledRev:
      return small ? ModelKind::ReducedRevSmallDelta : ModelKind::ReducedRevBigDelta;
    default:
      throw ConfigError("converge needs a full model (full_scaled_irrev or full_scaled_rev)",
                        "model");
  }
}

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec s;
  s.epsilons = epsilons;
  s.full_kind = model;
  s.reduced_kind = reduced_partner();
  s.rates = rates;
  s.diffusion = diffusion;
  s.length = length;
  s.cells = cells;
  s.initial = initial;
  s.final_time = final_time;
  s.integrator = integrator;
  s.validate();
  return s;
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("config line " + std::to_string(e.mark.line + 1) + ": " + e.msg, "",
                      e.mark.line + 1);
  }
  return from_yaml(root);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'", "config");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_schema() {
  return R"(model              required; one of full_scaled_irrev, full_scaled_rev,
                   reduced_irrev_small_delta, reduced_irrev_big_delta,
                   reduced_rev_small_delta, reduced_rev_big_delta, slow_complex_formation
reduced_model      reduced partner for converge (default from model and d_c - d_e)
grid               {length: 1.0, cells: 100}
rates              {k1: 1, k_m1: 1, k2: 1, k_m2: 0}
diffusion          {s: 1, e: 1, c: 2, p: 0}
epsilon            required by full models in simulate
epsilons           list for converge (default [1, 0.1, 0.01, 0.001, 0.0001])
final_time         0.005
snapshots          times in [0, final_time] for simulate (default [final_time])
initial_condition  {s_low, s_high, step_position, c_amplitude, c_offset, y_amplitude,
                    y_offset, bump_amplitude, bump_center, bump_width, p_value}
integrator         {abs_tol: 1e-14, rel_tol: 1e-10, initial_step, max_step,
                    max_newton_iters: 10, newton_tol: 0.03, max_steps}
output             {directory: out}
seed               1 (verify-tf)
samples            100 (verify-tf)
verify_cells       [1, 2, 5, 10] (verify-tf)
)";
}

}  // namespace qssmm
