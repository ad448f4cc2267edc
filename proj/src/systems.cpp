#include "qssmm/systems.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qssmm/errors.hpp"

namespace qssmm {
namespace {

std::vector<std::string> names_for(ModelKind kind) {
  switch (kind) {
    case ModelKind::FullScaledIrrev:
      return {"s", "c_star", "y_star"};
    case ModelKind::FullScaledRev:
      return {"s", "c_star", "y_star", "p"};
    case ModelKind::ReducedIrrevSmallDelta:
    case ModelKind::ReducedIrrevBigDelta:
      return {"s", "y_star"};
    case ModelKind::ReducedRevSmallDelta:
    case ModelKind::ReducedRevBigDelta:
      return {"s", "y_star", "p"};
    case ModelKind::SlowComplexFormation:
      return {"s", "e", "p"};
    default:
      throw ConfigError("model " + std::string(to_string(kind)) +
                            " has no spatial discretization",
                        "model");
  }
}

// Species slots used by the right-hand sides.
constexpr std::size_t kS = 0;
constexpr std::size_t kFullC = 1;
constexpr std::size_t kFullY = 2;
constexpr std::size_t kFullP = 3;
constexpr std::size_t kRedY = 1;
constexpr std::size_t kRedP = 2;

}  // namespace

MethodOfLinesSystem::MethodOfLinesSystem(ModelSpec spec, Grid1D grid)
    : spec_(std::move(spec)), lap_(grid) {
  spec_.validate();
  species_ = names_for(spec_.kind).size();
  bandwidth_ = 2 * species_ - 1;
  in_.assign(species_, Field(lap_.size()));
  out_.assign(species_, Field(lap_.size()));
  scratch_.assign(2 * lap_.size(), 0.0);
}

std::vector<std::string> MethodOfLinesSystem::species_names() const { return names_for(spec_.kind); }

std::size_t MethodOfLinesSystem::species_index(const std::string& name) const {
  const auto names = species_names();
  const auto it = std::find(names.begin(), names.end(), name);
  return static_cast<std::size_t>(it - names.begin());
}

void MethodOfLinesSystem::gather(std::span<const double> y) const {
  if (y.size() != size()) {
    throw DimensionError("state has " + std::to_string(y.size()) + " entries, expected " +
                         std::to_string(size()));
  }
  const std::size_t n = lap_.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t k = 0; k < species_; ++k) in_[k][a] = y[a * species_ + k];
  }
}

void MethodOfLinesSystem::scatter(std::span<double> dydt) const {
  const std::size_t n = lap_.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t k = 0; k < species_; ++k) dydt[a * species_ + k] = out_[k][a];
  }
}

void MethodOfLinesSystem::rhs(std::span<const double> y, std::span<double> dydt) const {
  gather(y);
  if (dydt.size() != size()) throw DimensionError("derivative buffer has the wrong length");
  switch (spec_.kind) {
    case ModelKind::FullScaledIrrev:
      detail::eval_full_scaled(spec_, lap_, {in_[kS], in_[kFullC], in_[kFullY], {}},
                               {out_[kS], out_[kFullC], out_[kFullY], {}});
      break;
    case ModelKind::FullScaledRev:
      detail::eval_full_scaled(spec_, lap_, {in_[kS], in_[kFullC], in_[kFullY], in_[kFullP]},
                               {out_[kS], out_[kFullC], out_[kFullY], out_[kFullP]});
      break;
    case ModelKind::ReducedIrrevSmallDelta:
    case ModelKind::ReducedIrrevBigDelta:
      detail::eval_reduced(spec_, lap_, {in_[kS], in_[kRedY], {}}, {out_[kS], out_[kRedY], {}},
                           scratch_);
      break;
    case ModelKind::ReducedRevSmallDelta:
    case ModelKind::ReducedRevBigDelta:
      detail::eval_reduced(spec_, lap_, {in_[kS], in_[kRedY], in_[kRedP]},
                           {out_[kS], out_[kRedY], out_[kRedP]}, scratch_);
      break;
    case ModelKind::SlowComplexFormation: {
      const auto tangent = rhs_slow_complex_formation({in_[0], in_[1], in_[2]}, spec_.rates,
                                                      spec_.diffusion, lap_);
      out_[0] = tangent.s;
      out_[1] = tangent.e;
      out_[2] = tangent.p;
      break;
    }
    default:
      throw ConfigError("unsupported model kind", "model");
  }
  scatter(dydt);
}

void MethodOfLinesSystem::add_diffusion(BandMatrix& jac, std::size_t row_species,
                                        std::size_t col_species, double coefficient) const {
  if (coefficient == 0.0) return;
  const std::size_t n = lap_.size();
  const std::size_t m = species_;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t row = a * m + row_species;
    jac(row, a * m + col_species) += coefficient * lap_.diagonal(a);
    if (a > 0) jac(row, (a - 1) * m + col_species) += coefficient * lap_.off_diagonal(a - 1);
    if (a + 1 < n) jac(row, (a + 1) * m + col_species) += coefficient * lap_.off_diagonal(a);
  }
}

void MethodOfLinesSystem::jacobian(std::span<const double> y, BandMatrix& jac) const {
  gather(y);
  jac.set_zero();
  const std::size_t n = lap_.size();
  const std::size_t m = species_;
  const auto& r = spec_.rates;
  const auto& d = spec_.diffusion;

  switch (spec_.kind) {
    case ModelKind::FullScaledIrrev:
    case ModelKind::FullScaledRev: {
      const bool rev = spec_.kind == ModelKind::FullScaledRev;
      const double inv_eps = 1.0 / spec_.eps();
      for (std::size_t a = 0; a < n; ++a) {
        const double s = in_[kS][a];
        const double c = in_[kFullC][a];
        const double yv = in_[kFullY][a];
        const double p = rev ? in_[kFullP][a] : 0.0;
        const std::size_t is = a * m + kS;
        const std::size_t ic = a * m + kFullC;
        const std::size_t iy = a * m + kFullY;
        // s row
        jac(is, is) += r.k1 * (c - yv);
        jac(is, ic) += r.k1 * s + r.k_m1;
        jac(is, iy) += -r.k1 * s;
        // c* row
        jac(ic, is) += inv_eps * r.k1 * (yv - c);
        jac(ic, ic) += -inv_eps * (r.k1 * s + r.k_m1 + r.k2 + r.k_m2 * p);
        jac(ic, iy) += inv_eps * (r.k1 * s + r.k_m2 * p);
        if (rev) {
          const std::size_t ip = a * m + kFullP;
          jac(ic, ip) += inv_eps * r.k_m2 * (yv - c);
          jac(ip, ip) += r.k_m2 * (c - yv);
          jac(ip, ic) += r.k2 + r.k_m2 * p;
          jac(ip, iy) += -r.k_m2 * p;
        }
      }
      add_diffusion(jac, kS, kS, d.d_s);
      add_diffusion(jac, kFullC, kFullC, d.d_c);
      add_diffusion(jac, kFullY, kFullY, d.d_e);
      add_diffusion(jac, kFullY, kFullC, d.delta());
      if (rev) add_diffusion(jac, kFullP, kFullP, d.d_p);
      break;
    }
    case ModelKind::ReducedIrrevSmallDelta:
    case ModelKind::ReducedIrrevBigDelta:
    case ModelKind::ReducedRevSmallDelta:
    case ModelKind::ReducedRevBigDelta: {
      const bool rev = is_reversible(spec_.kind);
      const bool coupled = has_delta_coupling(spec_.kind);
      const double delta = d.delta();
      const double k1k2 = r.k1 * r.k2;
      const double km1km2 = r.k_m1 * r.k_m2;
      // Partial derivatives of the manifold value per cell, for the delta coupling.
      std::vector<double> dc_ds(n), dc_dy(n), dc_dp(n);
      for (std::size_t a = 0; a < n; ++a) {
        const double s = std::max(0.0, in_[kS][a]);
        const double yv = std::max(0.0, in_[kRedY][a]);
        const double p = rev ? std::max(0.0, in_[kRedP][a]) : 0.0;
        const double den = r.k1 * s + r.k_m1 + r.k2 + r.k_m2 * p;
        const double den2 = den * den;
        const double num = k1k2 * s - km1km2 * p;
        const double dq_ds = yv * (k1k2 * den - num * r.k1) / den2;
        const double dq_dy = num / den;
        const double dq_dp = yv * (-km1km2 * den - num * r.k_m2) / den2;
        const std::size_t is = a * m + kS;
        const std::size_t iy = a * m + kRedY;
        jac(is, is) -= dq_ds;
        jac(is, iy) -= dq_dy;
        if (rev) {
          const std::size_t ip = a * m + kRedP;
          jac(is, ip) -= dq_dp;
          jac(ip, is) += dq_ds;
          jac(ip, iy) += dq_dy;
          jac(ip, ip) += dq_dp;
        }
        dc_ds[a] = yv * r.k1 * (r.k_m1 + r.k2) / den2;
        dc_dy[a] = (r.k1 * s + r.k_m2 * p) / den;
        dc_dp[a] = yv * r.k_m2 * (r.k_m1 + r.k2) / den2;
      }
      add_diffusion(jac, kS, kS, d.d_s);
      add_diffusion(jac, kRedY, kRedY, d.d_e);
      if (rev) add_diffusion(jac, kRedP, kRedP, d.d_p);
      if (coupled && delta != 0.0) {
        for (std::size_t a = 0; a < n; ++a) {
          const std::size_t row = a * m + kRedY;
          for (std::size_t b = (a > 0 ? a - 1 : 0); b <= std::min(n - 1, a + 1); ++b) {
            const double w = delta * lap_.entry(a, b);
            if (w == 0.0) continue;
            jac(row, b * m + kS) += w * dc_ds[b];
            jac(row, b * m + kRedY) += w * dc_dy[b];
            if (rev) jac(row, b * m + kRedP) += w * dc_dp[b];
          }
        }
      }
      break;
    }
    case ModelKind::SlowComplexFormation: {
      const double denom = r.k_m1 + r.k2;
      const double kf = r.k1 * r.k2 / denom;
      const double kb = r.k_m1 * r.k_m2 / denom;
      for (std::size_t a = 0; a < n; ++a) {
        const double s = in_[0][a];
        const double e = in_[1][a];
        const double p = in_[2][a];
        const std::size_t is = a * m;
        const std::size_t ie = is + 1;
        const std::size_t ip = is + 2;
        jac(is, is) += -kf * e;
        jac(is, ie) += -kf * s + kb * p;
        jac(is, ip) += kb * e;
        jac(ip, is) += kf * e;
        jac(ip, ie) += kf * s - kb * p;
        jac(ip, ip) += -kb * e;
      }
      add_diffusion(jac, 0, 0, d.d_s);
      add_diffusion(jac, 1, 1, d.d_e);
      add_diffusion(jac, 2, 2, d.d_p);
      break;
    }
    default:
      throw ConfigError("unsupported model kind", "model");
  }
}

std::vector<double> MethodOfLinesSystem::pack(const FullState& state) const {
  if (!is_full(spec_.kind) || state.reversible() != is_reversible(spec_.kind)) {
    throw DimensionError("full state does not match model " + std::string(to_string(spec_.kind)));
  }
  std::vector<const Field*> fields{&state.s, &state.c_star, &state.y_star};
  if (state.reversible()) fields.push_back(&state.p);
  std::vector<double> y(size());
  const std::size_t n = lap_.size();
  for (std::size_t k = 0; k < species_; ++k) {
    if (fields[k]->size() != n) throw DimensionError("field length does not match grid");
    for (std::size_t a = 0; a < n; ++a) y[a * species_ + k] = (*fields[k])[a];
  }
  return y;
}

std::vector<double> MethodOfLinesSystem::pack(const ReducedState& state) const {
  if (!is_reduced(spec_.kind) || state.reversible() != is_reversible(spec_.kind)) {
    throw DimensionError("reduced state does not match model " +
                         std::string(to_string(spec_.kind)));
  }
  std::vector<const Field*> fields{&state.s, &state.y_star};
  if (state.reversible()) fields.push_back(&state.p);
  std::vector<double> y(size());
  const std::size_t n = lap_.size();
  for (std::size_t k = 0; k < species_; ++k) {
    if (fields[k]->size() != n) throw DimensionError("field length does not match grid");
    for (std::size_t a = 0; a < n; ++a) y[a * species_ + k] = (*fields[k])[a];
  }
  return y;
}

std::vector<double> MethodOfLinesSystem::pack(const SlowComplexState& state) const {
  if (spec_.kind != ModelKind::SlowComplexFormation) {
    throw DimensionError("slow-complex state does not match model");
  }
  const std::vector<const Field*> fields{&state.s, &state.e, &state.p};
  std::vector<double> y(size());
  const std::size_t n = lap_.size();
  for (std::size_t k = 0; k < species_; ++k) {
    if (fields[k]->size() != n) throw DimensionError("field length does not match grid");
    for (std::size_t a = 0; a < n; ++a) y[a * species_ + k] = (*fields[k])[a];
  }
  return y;
}

Field MethodOfLinesSystem::extract(std::span<const double> y, std::size_t k) const {
  if (y.size() != size() || k >= species_) throw DimensionError("extract: bad state or species");
  Field f(lap_.size());
  for (std::size_t a = 0; a < f.size(); ++a) f[a] = y[a * species_ + k];
  return f;
}

FullState MethodOfLinesSystem::unpack_full(std::span<const double> y) const {
  if (!is_full(spec_.kind)) throw DimensionError("model is not a full model");
  FullState st{extract(y, kS), extract(y, kFullC), extract(y, kFullY), {}};
  if (is_reversible(spec_.kind)) st.p = extract(y, kFullP);
  return st;
}

ReducedState MethodOfLinesSystem::unpack_reduced(std::span<const double> y) const {
  if (!is_reduced(spec_.kind)) throw DimensionError("model is not a reduced model");
  ReducedState st{extract(y, kS), extract(y, kRedY), {}};
  if (is_reversible(spec_.kind)) st.p = extract(y, kRedP);
  return st;
}

SlowComplexState MethodOfLinesSystem::unpack_slow_complex(std::span<const double> y) const {
  if (spec_.kind != ModelKind::SlowComplexFormation) {
    throw DimensionError("model is not the slow-complex-formation model");
  }
  return {extract(y, 0), extract(y, 1), extract(y, 2)};
}

HomogeneousSystem::HomogeneousSystem(ModelSpec spec, double e0_star, double s0)
    : spec_(std::move(spec)), e0_star_(e0_star), s0_(s0) {
  if (!is_homogeneous(spec_.kind)) {
    throw ConfigError("HomogeneousSystem needs a homogeneous model kind", "model");
  }
  spec_.validate();
  if (!(e0_star >= 0.0)) throw ConfigError("e0* must be nonnegative", "e0_star");
}

std::size_t HomogeneousSystem::size() const {
  return spec_.kind == ModelKind::HomogeneousFullIrrev ? 2 : 1;
}

void HomogeneousSystem::rhs(std::span<const double> y, std::span<double> dydt) const {
  switch (spec_.kind) {
    case ModelKind::HomogeneousFullIrrev: {
      const auto d = rhs_homogeneous_full_irrev(y[0], y[1], e0_star_, spec_.eps(), spec_.rates);
      dydt[0] = d[0];
      dydt[1] = d[1];
      break;
    }
    case ModelKind::HomogeneousReducedIrrev:
      dydt[0] = rhs_homogeneous_reduced_irrev(y[0], e0_star_, spec_.rates);
      break;
    case ModelKind::HomogeneousReducedRev:
      dydt[0] = rhs_homogeneous_reduced_rev(y[0], s0_, e0_star_, spec_.rates);
      break;
    default:
      throw ConfigError("unsupported model kind", "model");
  }
}

}  // namespace qssmm
