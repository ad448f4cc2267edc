#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "qssmm/grid.hpp"
#include "qssmm/models.hpp"

namespace qssmm {

/// x' = P(x) mu(x) / eps + h1(x) with P of full column rank.
struct FastSlowDecomposition {
  std::size_t dimension = 0;  ///< m
  std::size_t rank = 0;       ///< r < m
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> mu;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> P;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> h1;
  /// Optional closed-form D mu, used to cross-check the numerical one.
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> mu_jacobian;
  /// Required margin nu: eigenvalues of D mu P must have real part <= -nu.
  double spectral_margin = 0.0;
};

struct ReductionOptions {
  double manifold_tol = 1e-10;
  double max_condition = 1e12;
  /// Also form the m x m projection matrix Q.
  bool compute_projection = false;
};

struct ReductionResult {
  Eigen::VectorXd reduced_field;
  std::optional<Eigen::MatrixXd> projection;  ///< Q, when requested
  Eigen::MatrixXd mu_jacobian;                ///< D mu(x), r x m
  Eigen::MatrixXd P;                          ///< P(x), m x r
  Eigen::VectorXcd spectrum;                  ///< eigenvalues of D mu P
  double condition_number = 0.0;
  bool spectral_ok = false;
};

/// Central differences with step cbrt(eps) * max(1, |x_i|). When the
/// decomposition carries a closed-form Jacobian the two must agree to 1e-6.
/// Throws NumericalError on non-finite mu values or disagreement.
Eigen::MatrixXd jacobian_mu(const FastSlowDecomposition& decomp, const Eigen::VectorXd& x);

/// Q h1(x) with Q = I - P (D mu P)^-1 D mu. Throws ReductionError when x is off
/// the manifold or D mu P is ill-conditioned.
ReductionResult tf_reduce_generic(const FastSlowDecomposition& decomp, const Eigen::VectorXd& x,
                                  const ReductionOptions& options = {});

/// State layout used by the Michaelis-Menten decompositions: blocks
/// [s, c*, y*] or [s, c*, y*, p], each of N cells.
Eigen::VectorXd mm_tf_state(const FullState& state);

/// Decomposition of the discretized scaled system. `small_delta` moves the
/// delta D c* coupling out of h1 (it is O(eps) in that regime).
FastSlowDecomposition mm_decomposition(const Grid1D& grid, const RateConstants& rates,
                                       const DiffusionConstants& diffusion, bool reversible,
                                       bool small_delta);

/// One decomposition per reduced model kind.
std::map<ModelKind, FastSlowDecomposition> register_mm_decompositions(
    const Grid1D& grid, const RateConstants& rates, const DiffusionConstants& diffusion);

struct TfOracleOptions {
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  /// Upper end of the uniform draws for s, y* and p.
  double state_scale = 2.0;
  /// Added to every closed-form component; a nonzero value is a negative control.
  double closed_form_perturbation = 0.0;
};

struct TfOracleReport {
  double max_deviation = 0.0;  ///< max over samples of |tf - closed|_inf / (1 + |closed|_inf)
  double max_projection_defect = 0.0;  ///< max of |Q^2 - Q|, |Q P| when projections were formed
  double max_tangency_defect = 0.0;    ///< max |D mu . reduced| / (1 + |D mu| |h1|)
  double min_spectral_gap = 0.0;       ///< min over samples of -max Re(spectrum)
  bool spectral_ok = true;
  std::size_t samples = 0;
};

/// Compares the generic projection with the closed-form reduced right-hand
/// side of `kind` at random on-manifold states.
TfOracleReport run_tf_oracle(ModelKind kind, const Grid1D& grid, const RateConstants& rates,
                             const DiffusionConstants& diffusion, const TfOracleOptions& options,
                             bool check_projection = false);

}  // namespace qssmm
