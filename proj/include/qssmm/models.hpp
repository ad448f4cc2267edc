#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "qssmm/grid.hpp"
#include "qssmm/simd/kernels.hpp"

namespace qssmm {

/// Mass-action rate constants of E + S <-> C <-> E + P.
struct RateConstants {
  double k1 = 1.0;
  double k_m1 = 1.0;
  double k2 = 1.0;
  double k_m2 = 0.0;

  bool irreversible() const noexcept { return k_m2 == 0.0; }
  simd::ReactionRates kernel() const noexcept { return {k1, k_m1, k2, k_m2}; }

  /// All constants finite and nonnegative.
  void validate() const;
  /// Additionally k1 > 0 and k_m1 + k2 > 0, so manifold denominators stay
  /// positive on the nonnegative orthant.
  void validate_for_manifold() const;
};

/// Diffusivities in slow time (already divided by epsilon).
struct DiffusionConstants {
  double d_s = 1.0;
  double d_e = 1.0;
  double d_c = 2.0;
  double d_p = 0.0;

  /// d_c - d_e; never stored.
  double delta() const noexcept { return d_c - d_e; }
  void validate() const;
};

enum class ModelKind {
  FullScaledIrrev,
  FullScaledRev,
  ReducedIrrevSmallDelta,
  ReducedIrrevBigDelta,
  ReducedRevSmallDelta,
  ReducedRevBigDelta,
  SlowComplexFormation,
  HomogeneousFullIrrev,
  HomogeneousReducedIrrev,
  HomogeneousReducedRev,
};

std::string_view to_string(ModelKind kind) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view name) noexcept;

/// Kinds integrated with the stiff epsilon^-1 fast block.
bool needs_epsilon(ModelKind kind) noexcept;
bool is_full(ModelKind kind) noexcept;
bool is_reduced(ModelKind kind) noexcept;
bool is_reversible(ModelKind kind) noexcept;
bool is_homogeneous(ModelKind kind) noexcept;
/// Reduced kinds that keep the delta * D(manifold) coupling in the y* equation.
bool has_delta_coupling(ModelKind kind) noexcept;

struct ModelSpec {
  ModelKind kind = ModelKind::FullScaledIrrev;
  RateConstants rates;
  DiffusionConstants diffusion;
  std::optional<double> epsilon;

  void validate() const;
  double eps() const;  // throws ConfigError if absent
};

/// State of the scaled full system: substrate, rescaled complex c* = c/eps,
/// rescaled total enzyme y* = y/eps, and product (empty when irreversible).
struct FullState {
  Field s;
  Field c_star;
  Field y_star;
  Field p;

  bool reversible() const noexcept { return !p.empty(); }
  std::size_t cells() const noexcept { return s.size(); }
};

/// State of a reduced system; p is empty when irreversible.
struct ReducedState {
  Field s;
  Field y_star;
  Field p;

  bool reversible() const noexcept { return !p.empty(); }
  std::size_t cells() const noexcept { return s.size(); }
};

/// Substrate, free enzyme and product of the slow-complex-formation reduction.
struct SlowComplexState {
  Field s;
  Field e;
  Field p;
};

// Value-returning right-hand sides in slow time tau.

FullState rhs_full_scaled_irrev(const FullState& state, const ModelSpec& spec,
                                const DiscreteLaplacian& lap);
FullState rhs_full_scaled_rev(const FullState& state, const ModelSpec& spec,
                              const DiscreteLaplacian& lap);
ReducedState rhs_reduced_irrev(const ReducedState& state, const ModelSpec& spec,
                               const DiscreteLaplacian& lap);
ReducedState rhs_reduced_rev(const ReducedState& state, const ModelSpec& spec,
                             const DiscreteLaplacian& lap);
SlowComplexState rhs_slow_complex_formation(const SlowComplexState& state,
                                            const RateConstants& rates,
                                            const DiffusionConstants& diffusion,
                                            const DiscreteLaplacian& lap);

/// Homogeneous full irreversible system in slow time, with unscaled complex c:
///   s' = -k1 s e0* + (k1 s + k_m1) c / eps,  c' = k1 s e0* - (k1 s + k_m1 + k2) c / eps.
std::array<double, 2> rhs_homogeneous_full_irrev(double s, double c, double e0_star,
                                                 double epsilon, const RateConstants& rates);
/// s' = -k1 k2 s e0* / (k1 s + k_m1 + k2).
double rhs_homogeneous_reduced_irrev(double s, double e0_star, const RateConstants& rates);
/// s' = -(k1 k2 s + k_m1 k_m2 (s - s0)) e0* / (k1 s + k_m2 (s0 - s) + k_m1 + k2).
double rhs_homogeneous_reduced_rev(double s, double s0, double e0_star, const RateConstants& rates);

/// c* on the slow manifold; pass an empty `p` for the irreversible manifold.
Field slow_manifold_c(const Field& s, const Field& y_star, const Field& p,
                      const RateConstants& rates);

struct ProjectedInitialValues {
  ReducedState reduced;
  Field c_star;  ///< manifold value matching `reduced`
};

/// Keeps s, y* (and p) and places c* on the slow manifold.
ProjectedInitialValues project_initial_values(const FullState& raw, const RateConstants& rates);

namespace detail {

// Span-based kernels behind the value API, reused by the integrator adaptors.
// Output spans must not alias inputs.

struct FullFields {
  std::span<const double> s, c, y, p;  // p empty when irreversible
};
struct FullTangent {
  std::span<double> s, c, y, p;
};
void eval_full_scaled(const ModelSpec& spec, const DiscreteLaplacian& lap, const FullFields& in,
                      const FullTangent& out);

struct ReducedFields {
  std::span<const double> s, y, p;
};
struct ReducedTangent {
  std::span<double> s, y, p;
};
/// `scratch` needs 2 * cells entries.
void eval_reduced(const ModelSpec& spec, const DiscreteLaplacian& lap, const ReducedFields& in,
                  const ReducedTangent& out, std::span<double> scratch);

}  // namespace detail

}  // namespace qssmm
