#include "qssmm/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "qssmm/errors.hpp"

namespace qssmm {
namespace {

void require_nonnegative(double value, const char* field) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ConfigError(std::string(field) + " must be finite and nonnegative", field);
  }
}

void require_length(std::size_t actual, std::size_t expected, const char* what) {
  if (actual != expected) {
    throw DimensionError(std::string(what) + " has " + std::to_string(actual) +
                         " entries, expected " + std::to_string(expected));
  }
}

constexpr std::array<std::pair<ModelKind, std::string_view>, 10> kKindNames{{
    {ModelKind::FullScaledIrrev, "full_scaled_irrev"},
    {ModelKind::FullScaledRev, "full_scaled_rev"},
    {ModelKind::ReducedIrrevSmallDelta, "reduced_irrev_small_delta"},
    {ModelKind::ReducedIrrevBigDelta, "reduced_irrev_big_delta"},
    {ModelKind::ReducedRevSmallDelta, "reduced_rev_small_delta"},
    {ModelKind::ReducedRevBigDelta, "reduced_rev_big_delta"},
    {ModelKind::SlowComplexFormation, "slow_complex_formation"},
    {ModelKind::HomogeneousFullIrrev, "homogeneous_full_irrev"},
    {ModelKind::HomogeneousReducedIrrev, "homogeneous_reduced_irrev"},
    {ModelKind::HomogeneousReducedRev, "homogeneous_reduced_rev"},
}};

}  // namespace

void RateConstants::validate() const {
  require_nonnegative(k1, "rates.k1");
  require_nonnegative(k_m1, "rates.k_m1");
  require_nonnegative(k2, "rates.k2");
  require_nonnegative(k_m2, "rates.k_m2");
}

void RateConstants::validate_for_manifold() const {
  validate();
  if (!(k1 > 0.0)) throw ConfigError("rates.k1 must be positive", "rates.k1");
  if (!(k_m1 + k2 > 0.0)) {
    throw ConfigError("rates.k_m1 + rates.k2 must be positive", "rates.k_m1");
  }
}

void DiffusionConstants::validate() const {
  require_nonnegative(d_s, "diffusion.s");
  require_nonnegative(d_e, "diffusion.e");
  require_nonnegative(d_c, "diffusion.c");
  require_nonnegative(d_p, "diffusion.p");
}

std::string_view to_string(ModelKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) noexcept {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

bool is_full(ModelKind kind) noexcept {
  return kind == ModelKind::FullScaledIrrev || kind == ModelKind::FullScaledRev;
}

bool needs_epsilon(ModelKind kind) noexcept {
  return is_full(kind) || kind == ModelKind::HomogeneousFullIrrev;
}

bool is_reduced(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::ReducedIrrevSmallDelta:
    case ModelKind::ReducedIrrevBigDelta:
    case ModelKind::ReducedRevSmallDelta:
    case ModelKind::ReducedRevBigDelta:
      return true;
    default:
      return false;
  }
}

bool is_reversible(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::FullScaledRev:
    case ModelKind::ReducedRevSmallDelta:
    case ModelKind::ReducedRevBigDelta:
    case ModelKind::SlowComplexFormation:
    case ModelKind::HomogeneousReducedRev:
      return true;
    default:
      return false;
  }
}

bool is_homogeneous(ModelKind kind) noexcept {
  return kind == ModelKind::HomogeneousFullIrrev || kind == ModelKind::HomogeneousReducedIrrev ||
         kind == ModelKind::HomogeneousReducedRev;
}

bool has_delta_coupling(ModelKind kind) noexcept {
  return kind == ModelKind::ReducedIrrevBigDelta || kind == ModelKind::ReducedRevBigDelta;
}

void ModelSpec::validate() const {
  diffusion.validate();
  if (is_reduced(kind) || is_homogeneous(kind)) {
    rates.validate_for_manifold();
  } else {
    rates.validate();
  }
  if (needs_epsilon(kind)) {
    if (!epsilon) throw ConfigError("model " + std::string(to_string(kind)) + " requires epsilon", "epsilon");
    if (!(*epsilon > 0.0) || !std::isfinite(*epsilon)) {
      throw ConfigError("epsilon must be positive and finite", "epsilon");
    }
  } else if (epsilon) {
    throw ConfigError("epsilon is only meaningful for full models", "epsilon");
  }
  const bool irreversible_kind = !is_reversible(kind);
  if (irreversible_kind && !rates.irreversible()) {
    throw ConfigError("irreversible model " + std::string(to_string(kind)) + " requires k_m2 = 0",
                      "rates.k_m2");
  }
}

double ModelSpec::eps() const {
  if (!epsilon) throw ConfigError("epsilon is required", "epsilon");
  if (!(*epsilon > 0.0)) throw ConfigError("epsilon must be positive", "epsilon");
  return *epsilon;
}

namespace detail {

void eval_full_scaled(const ModelSpec& spec, const DiscreteLaplacian& lap, const FullFields& in,
                      const FullTangent& out) {
  const std::size_t n = lap.size();
  const double eps = spec.eps();
  const bool reversible = !in.p.empty();
  require_length(in.s.size(), n, "s");
  require_length(in.c.size(), n, "c_star");
  require_length(in.y.size(), n, "y_star");
  require_length(out.s.size(), n, "ds");
  require_length(out.c.size(), n, "dc_star");
  require_length(out.y.size(), n, "dy_star");
  if (reversible) {
    require_length(in.p.size(), n, "p");
    require_length(out.p.size(), n, "dp");
  }

  const auto& k = simd::active();
  const auto rates = spec.rates.kernel();
  // out.c temporarily holds mu.
  k.full_reaction(rates, in.s.data(), in.c.data(), in.y.data(), reversible ? in.p.data() : nullptr,
                  out.s.data(), out.c.data(), reversible ? out.p.data() : nullptr, n);
  for (std::size_t i = 0; i < n; ++i) out.c[i] /= eps;

  const auto& d = spec.diffusion;
  lap.apply_add(d.d_s, in.s, out.s);
  lap.apply_add(d.d_c, in.c, out.c);
  std::fill(out.y.begin(), out.y.end(), 0.0);
  lap.apply_add(d.d_e, in.y, out.y);
  lap.apply_add(d.delta(), in.c, out.y);
  if (reversible) lap.apply_add(d.d_p, in.p, out.p);
}

void eval_reduced(const ModelSpec& spec, const DiscreteLaplacian& lap, const ReducedFields& in,
                  const ReducedTangent& out, std::span<double> scratch) {
  const std::size_t n = lap.size();
  const bool reversible = !in.p.empty();
  require_length(in.s.size(), n, "s");
  require_length(in.y.size(), n, "y_star");
  require_length(out.s.size(), n, "ds");
  require_length(out.y.size(), n, "dy_star");
  if (reversible) {
    require_length(in.p.size(), n, "p");
    require_length(out.p.size(), n, "dp");
  }
  if (scratch.size() < 2 * n) throw DimensionError("eval_reduced: scratch too small");

  std::span<double> cman = scratch.subspan(0, n);
  std::span<double> quotient = scratch.subspan(n, n);
  simd::active().manifold(spec.rates.kernel(), in.s.data(), in.y.data(),
                          reversible ? in.p.data() : nullptr, cman.data(), quotient.data(), n);

  const auto& d = spec.diffusion;
  for (std::size_t i = 0; i < n; ++i) out.s[i] = -quotient[i];
  lap.apply_add(d.d_s, in.s, out.s);

  std::fill(out.y.begin(), out.y.end(), 0.0);
  lap.apply_add(d.d_e, in.y, out.y);
  if (has_delta_coupling(spec.kind)) lap.apply_add(d.delta(), cman, out.y);

  if (reversible) {
    for (std::size_t i = 0; i < n; ++i) out.p[i] = quotient[i];
    lap.apply_add(d.d_p, in.p, out.p);
  }
}

}  // namespace detail

namespace {

FullState full_rhs(const FullState& state, const ModelSpec& spec, const DiscreteLaplacian& lap) {
  const std::size_t n = lap.size();
  FullState out{Field(n), Field(n), Field(n), state.reversible() ? Field(n) : Field{}};
  detail::eval_full_scaled(spec, lap, {state.s, state.c_star, state.y_star, state.p},
                           {out.s, out.c_star, out.y_star, out.p});
  return out;
}

ReducedState reduced_rhs(const ReducedState& state, const ModelSpec& spec,
                         const DiscreteLaplacian& lap) {
  const std::size_t n = lap.size();
  ReducedState out{Field(n), Field(n), state.reversible() ? Field(n) : Field{}};
  Field scratch(2 * n);
  detail::eval_reduced(spec, lap, {state.s, state.y_star, state.p}, {out.s, out.y_star, out.p},
                       scratch);
  return out;
}

}  // namespace

FullState rhs_full_scaled_irrev(const FullState& state, const ModelSpec& spec,
                                const DiscreteLaplacian& lap) {
  if (state.reversible()) throw DimensionError("irreversible full state must not carry p");
  return full_rhs(state, spec, lap);
}

FullState rhs_full_scaled_rev(const FullState& state, const ModelSpec& spec,
                              const DiscreteLaplacian& lap) {
  if (!state.reversible()) throw DimensionError("reversible full state requires p");
  return full_rhs(state, spec, lap);
}

ReducedState rhs_reduced_irrev(const ReducedState& state, const ModelSpec& spec,
                               const DiscreteLaplacian& lap) {
  if (state.reversible()) throw DimensionError("irreversible reduced state must not carry p");
  return reduced_rhs(state, spec, lap);
}

ReducedState rhs_reduced_rev(const ReducedState& state, const ModelSpec& spec,
                             const DiscreteLaplacian& lap) {
  if (!state.reversible()) throw DimensionError("reversible reduced state requires p");
  return reduced_rhs(state, spec, lap);
}

SlowComplexState rhs_slow_complex_formation(const SlowComplexState& state,
                                            const RateConstants& rates,
                                            const DiffusionConstants& diffusion,
                                            const DiscreteLaplacian& lap) {
  const double denom = rates.k_m1 + rates.k2;
  if (!(denom > 0.0)) {
    throw ConfigError("slow complex formation requires k_m1 + k2 > 0", "rates.k_m1");
  }
  const std::size_t n = lap.size();
  require_length(state.s.size(), n, "s");
  require_length(state.e.size(), n, "e");
  require_length(state.p.size(), n, "p");
  const double kappa_fwd = rates.k1 * rates.k2 / denom;
  const double kappa_bwd = rates.k_m1 * rates.k_m2 / denom;

  SlowComplexState out{Field(n), Field(n, 0.0), Field(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double net = kappa_fwd * state.s[i] * state.e[i] - kappa_bwd * state.e[i] * state.p[i];
    out.s[i] = -net;
    out.p[i] = net;
  }
  lap.apply_add(diffusion.d_s, state.s, out.s);
  lap.apply_add(diffusion.d_e, state.e, out.e);
  lap.apply_add(diffusion.d_p, state.p, out.p);
  return out;
}

std::array<double, 2> rhs_homogeneous_full_irrev(double s, double c, double e0_star,
                                                 double epsilon, const RateConstants& rates) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive", "epsilon");
  const double k1s = rates.k1 * s;
  const double ds = -k1s * e0_star + (k1s + rates.k_m1) * c / epsilon;
  const double dc = k1s * e0_star - (k1s + rates.k_m1 + rates.k2) * c / epsilon;
  return {ds, dc};
}

double rhs_homogeneous_reduced_irrev(double s, double e0_star, const RateConstants& rates) {
  return -rates.k1 * rates.k2 * s * e0_star / (rates.k1 * s + rates.k_m1 + rates.k2);
}

double rhs_homogeneous_reduced_rev(double s, double s0, double e0_star, const RateConstants& rates) {
  const double num = rates.k1 * rates.k2 * s + rates.k_m1 * rates.k_m2 * (s - s0);
  const double den = rates.k1 * s + rates.k_m2 * (s0 - s) + rates.k_m1 + rates.k2;
  return -num * e0_star / den;
}

Field slow_manifold_c(const Field& s, const Field& y_star, const Field& p,
                      const RateConstants& rates) {
  const std::size_t n = s.size();
  require_length(y_star.size(), n, "y_star");
  if (!p.empty()) require_length(p.size(), n, "p");
  Field c(n);
  simd::active().manifold(rates.kernel(), s.data(), y_star.data(), p.empty() ? nullptr : p.data(),
                          c.data(), nullptr, n);
  return c;
}

ProjectedInitialValues project_initial_values(const FullState& raw, const RateConstants& rates) {
  ProjectedInitialValues out;
  out.reduced.s = raw.s;
  out.reduced.y_star = raw.y_star;
  out.reduced.p = raw.p;
  out.c_star = slow_manifold_c(raw.s, raw.y_star, raw.p, rates);
  return out;
}

}  // namespace qssmm
