#include "qssmm/tf_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "qssmm/errors.hpp"

namespace qssmm {
namespace {

bool is_diagonal(const Eigen::MatrixXd& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j && a(i, j) != 0.0) return false;
    }
  }
  return true;
}

Eigen::VectorXd apply_lap(const DiscreteLaplacian& lap, const Eigen::VectorXd& x, Eigen::Index block,
                          std::size_t n) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  lap.apply({x.data() + block * static_cast<Eigen::Index>(n), n}, {out.data(), n});
  return out;
}

}  // namespace

Eigen::MatrixXd jacobian_mu(const FastSlowDecomposition& decomp, const Eigen::VectorXd& x) {
  const auto m = static_cast<Eigen::Index>(decomp.dimension);
  const auto r = static_cast<Eigen::Index>(decomp.rank);
  if (x.size() != m) throw DimensionError("jacobian_mu: state has the wrong dimension");
  const double root = std::cbrt(std::numeric_limits<double>::epsilon());
  Eigen::MatrixXd jac(r, m);
  Eigen::VectorXd xp = x;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double h = root * std::max(1.0, std::abs(x(j)));
    xp(j) = x(j) + h;
    const Eigen::VectorXd fp = decomp.mu(xp);
    xp(j) = x(j) - h;
    const Eigen::VectorXd fm = decomp.mu(xp);
    xp(j) = x(j);
    if (fp.size() != r || fm.size() != r) throw DimensionError("mu returned the wrong dimension");
    if (!fp.allFinite() || !fm.allFinite()) {
      throw NumericalError("mu is not finite near coordinate " + std::to_string(j));
    }
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  if (decomp.mu_jacobian) {
    const Eigen::MatrixXd exact = decomp.mu_jacobian(x);
    if (exact.rows() != r || exact.cols() != m) {
      throw DimensionError("closed-form D mu has the wrong shape");
    }
    const double diff = (exact - jac).cwiseAbs().maxCoeff();
    if (!(diff <= 1e-6)) {
      throw NumericalError("finite-difference and closed-form D mu differ by " +
                           std::to_string(diff));
    }
  }
  return jac;
}

ReductionResult tf_reduce_generic(const FastSlowDecomposition& decomp, const Eigen::VectorXd& x,
                                  const ReductionOptions& options) {
  const auto m = static_cast<Eigen::Index>(decomp.dimension);
  const auto r = static_cast<Eigen::Index>(decomp.rank);
  if (!(r > 0 && r < m)) throw DimensionError("decomposition rank must lie in (0, dimension)");
  if (x.size() != m) throw DimensionError("tf_reduce_generic: state has the wrong dimension");

  const Eigen::VectorXd mu = decomp.mu(x);
  if (!mu.allFinite()) throw NumericalError("mu is not finite");
  const double off = mu.cwiseAbs().maxCoeff();
  if (off > options.manifold_tol) {
    throw ReductionError("state is off the slow manifold: |mu| = " + std::to_string(off));
  }

  ReductionResult res;
  res.mu_jacobian = jacobian_mu(decomp, x);
  res.P = decomp.P(x);
  if (res.P.rows() != m || res.P.cols() != r) throw DimensionError("P has the wrong shape");
  const Eigen::MatrixXd dmup = res.mu_jacobian * res.P;
  const Eigen::VectorXd h1 = decomp.h1(x);
  if (h1.size() != m) throw DimensionError("h1 has the wrong dimension");

  const Eigen::VectorXd rhs = res.mu_jacobian * h1;
  Eigen::VectorXd w;
  if (is_diagonal(dmup)) {
    const Eigen::VectorXd d = dmup.diagonal();
    const double big = d.cwiseAbs().maxCoeff();
    const double small = d.cwiseAbs().minCoeff();
    res.condition_number = small > 0.0 ? big / small : std::numeric_limits<double>::infinity();
    res.spectrum = d.cast<std::complex<double>>();
    if (res.condition_number > options.max_condition) {
      throw ReductionError("D mu P is ill-conditioned (condition " +
                           std::to_string(res.condition_number) + ")");
    }
    w = rhs.cwiseQuotient(d);
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dmup);
    const auto& sv = svd.singularValues();
    const double small = sv(sv.size() - 1);
    res.condition_number = small > 0.0 ? sv(0) / small : std::numeric_limits<double>::infinity();
    if (res.condition_number > options.max_condition) {
      throw ReductionError("D mu P is ill-conditioned (condition " +
                           std::to_string(res.condition_number) + ")");
    }
    res.spectrum = Eigen::EigenSolver<Eigen::MatrixXd>(dmup, false).eigenvalues();
    w = dmup.partialPivLu().solve(rhs);
  }
  res.reduced_field = h1 - res.P * w;
  res.spectral_ok = (res.spectrum.real().array() <= -decomp.spectral_margin).all();

  if (options.compute_projection) {
    Eigen::MatrixXd solved;
    if (is_diagonal(dmup)) {
      solved = dmup.diagonal().cwiseInverse().asDiagonal() * res.mu_jacobian;
    } else {
      solved = dmup.partialPivLu().solve(res.mu_jacobian);
    }
    res.projection = Eigen::MatrixXd::Identity(m, m) - res.P * solved;
  }
  return res;
}

Eigen::VectorXd mm_tf_state(const FullState& state) {
  const std::size_t n = state.cells();
  const std::size_t blocks = state.reversible() ? 4 : 3;
  Eigen::VectorXd x(static_cast<Eigen::Index>(blocks * n));
  const Field* fields[] = {&state.s, &state.c_star, &state.y_star, &state.p};
  for (std::size_t b = 0; b < blocks; ++b) {
    if (fields[b]->size() != n) throw DimensionError("mm_tf_state: field lengths differ");
    for (std::size_t a = 0; a < n; ++a) x(static_cast<Eigen::Index>(b * n + a)) = (*fields[b])[a];
  }
  return x;
}

FastSlowDecomposition mm_decomposition(const Grid1D& grid, const RateConstants& rates,
                                       const DiffusionConstants& diffusion, bool reversible,
                                       bool small_delta) {
  rates.validate_for_manifold();
  diffusion.validate();
  if (!reversible && !rates.irreversible()) {
    throw ConfigError("irreversible decomposition requires k_m2 = 0", "rates.k_m2");
  }
  const std::size_t n = grid.cell_count();
  const auto N = static_cast<Eigen::Index>(n);
  const Eigen::Index blocks = reversible ? 4 : 3;
  const RateConstants k = rates;
  const DiffusionConstants d = diffusion;
  const DiscreteLaplacian lap(grid);

  FastSlowDecomposition dec;
  dec.dimension = static_cast<std::size_t>(blocks * N);
  dec.rank = n;
  dec.spectral_margin = 0.5 * (k.k_m1 + k.k2);

  dec.mu = [=](const Eigen::VectorXd& x) {
    Eigen::VectorXd mu(N);
    for (Eigen::Index a = 0; a < N; ++a) {
      const double s = x(a), c = x(N + a), y = x(2 * N + a);
      const double kp = reversible ? k.k_m2 * x(3 * N + a) : 0.0;
      mu(a) = (k.k1 * s + kp) * y - (k.k1 * s + k.k_m1 + k.k2 + kp) * c;
    }
    return mu;
  };
  dec.P = [=](const Eigen::VectorXd&) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(blocks * N, N);
    P.block(N, 0, N, N).setIdentity();
    return P;
  };
  dec.mu_jacobian = [=](const Eigen::VectorXd& x) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, blocks * N);
    for (Eigen::Index a = 0; a < N; ++a) {
      const double s = x(a), c = x(N + a), y = x(2 * N + a);
      const double p = reversible ? x(3 * N + a) : 0.0;
      J(a, a) = k.k1 * (y - c);
      J(a, N + a) = -(k.k1 * s + k.k_m1 + k.k2 + k.k_m2 * p);
      J(a, 2 * N + a) = k.k1 * s + k.k_m2 * p;
      if (reversible) J(a, 3 * N + a) = k.k_m2 * (y - c);
    }
    return J;
  };
  dec.h1 = [=](const Eigen::VectorXd& x) {
    Eigen::VectorXd h(blocks * N);
    const Eigen::VectorXd ds = apply_lap(lap, x, 0, n);
    const Eigen::VectorXd dc = apply_lap(lap, x, 1, n);
    const Eigen::VectorXd dy = apply_lap(lap, x, 2, n);
    for (Eigen::Index a = 0; a < N; ++a) {
      const double s = x(a), c = x(N + a), y = x(2 * N + a);
      h(a) = d.d_s * ds(a) + (k.k1 * s + k.k_m1) * c - k.k1 * s * y;
      h(N + a) = d.d_c * dc(a);
      h(2 * N + a) = d.d_e * dy(a) + (small_delta ? 0.0 : d.delta() * dc(a));
    }
    if (reversible) {
      const Eigen::VectorXd dp = apply_lap(lap, x, 3, n);
      for (Eigen::Index a = 0; a < N; ++a) {
        const double c = x(N + a), y = x(2 * N + a), p = x(3 * N + a);
        h(3 * N + a) = d.d_p * dp(a) + (k.k2 + k.k_m2 * p) * c - k.k_m2 * p * y;
      }
    }
    return h;
  };
  return dec;
}

std::map<ModelKind, FastSlowDecomposition> register_mm_decompositions(
    const Grid1D& grid, const RateConstants& rates, const DiffusionConstants& diffusion) {
  std::map<ModelKind, FastSlowDecomposition> out;
  if (rates.irreversible()) {
    out.emplace(ModelKind::ReducedIrrevSmallDelta,
                mm_decomposition(grid, rates, diffusion, false, true));
    out.emplace(ModelKind::ReducedIrrevBigDelta,
                mm_decomposition(grid, rates, diffusion, false, false));
  }
  out.emplace(ModelKind::ReducedRevSmallDelta, mm_decomposition(grid, rates, diffusion, true, true));
  out.emplace(ModelKind::ReducedRevBigDelta, mm_decomposition(grid, rates, diffusion, true, false));
  return out;
}

TfOracleReport run_tf_oracle(ModelKind kind, const Grid1D& grid, const RateConstants& rates,
                             const DiffusionConstants& diffusion, const TfOracleOptions& options,
                             bool check_projection) {
  if (!is_reduced(kind)) {
    throw ConfigError("the oracle check needs a reduced model kind", "model");
  }
  const bool reversible = is_reversible(kind);
  const auto dec =
      mm_decomposition(grid, rates, diffusion, reversible, !has_delta_coupling(kind));
  ModelSpec spec{kind, rates, diffusion, std::nullopt};
  spec.validate();
  const DiscreteLaplacian lap(grid);
  const std::size_t n = grid.cell_count();
  const auto N = static_cast<Eigen::Index>(n);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> draw(0.0, options.state_scale);
  ReductionOptions ropt;
  ropt.compute_projection = check_projection;

  TfOracleReport report;
  report.min_spectral_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < options.samples; ++k) {
    FullState st{Field(n), Field(n), Field(n), reversible ? Field(n) : Field{}};
    for (std::size_t a = 0; a < n; ++a) {
      st.s[a] = draw(rng);
      st.y_star[a] = draw(rng);
      if (reversible) st.p[a] = draw(rng);
    }
    st.c_star = slow_manifold_c(st.s, st.y_star, st.p, rates);
    const Eigen::VectorXd x = mm_tf_state(st);
    const ReductionResult res = tf_reduce_generic(dec, x, ropt);

    const ReducedState red{st.s, st.y_star, st.p};
    ReducedState closed = reversible ? rhs_reduced_rev(red, spec, lap) : rhs_reduced_irrev(red, spec, lap);
    Eigen::VectorXd cf(N * (reversible ? 3 : 2));
    Eigen::VectorXd tf(cf.size());
    for (Eigen::Index a = 0; a < N; ++a) {
      cf(a) = closed.s[a];
      cf(N + a) = closed.y_star[a];
      tf(a) = res.reduced_field(a);
      tf(N + a) = res.reduced_field(2 * N + a);
      if (reversible) {
        cf(2 * N + a) = closed.p[a];
        tf(2 * N + a) = res.reduced_field(3 * N + a);
      }
    }
    cf.array() += options.closed_form_perturbation;
    const double dev = (tf - cf).cwiseAbs().maxCoeff() / (1.0 + cf.cwiseAbs().maxCoeff());
    report.max_deviation = std::max(report.max_deviation, dev);

    const Eigen::VectorXd h1 = dec.h1(x);
    const double tangency = (res.mu_jacobian * res.reduced_field).cwiseAbs().maxCoeff() /
                            (1.0 + res.mu_jacobian.cwiseAbs().maxCoeff() * h1.cwiseAbs().maxCoeff());
    report.max_tangency_defect = std::max(report.max_tangency_defect, tangency);
    report.min_spectral_gap = std::min(report.min_spectral_gap, -res.spectrum.real().maxCoeff());
    report.spectral_ok = report.spectral_ok && res.spectral_ok;
    if (res.projection) {
      const Eigen::MatrixXd& Q = *res.projection;
      const double idem = (Q * Q - Q).cwiseAbs().maxCoeff();
      const double annih = (Q * res.P).cwiseAbs().maxCoeff();
      report.max_projection_defect = std::max({report.max_projection_defect, idem, annih});
    }
    ++report.samples;
  }
  return report;
}

}  // namespace qssmm
