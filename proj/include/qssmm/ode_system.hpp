#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "qssmm/band_matrix.hpp"

namespace qssmm {

/// Autonomous ODE y' = f(y) with a banded Jacobian.
class OdeSystem {
public:
  virtual ~OdeSystem() = default;

  virtual std::size_t size() const = 0;
  virtual std::size_t lower_bandwidth() const = 0;
  virtual std::size_t upper_bandwidth() const = 0;

  virtual void rhs(std::span<const double> y, std::span<double> dydt) const = 0;

  /// Writes df/dy into `jac`, which has this system's size and bandwidths.
  /// The default uses grouped forward differences.
  virtual void jacobian(std::span<const double> y, BandMatrix& jac) const;
};

/// Forward-difference banded Jacobian. Columns j and j + (lower + upper + 1)
/// never share a row, so each group costs one right-hand side evaluation.
void finite_difference_jacobian(const OdeSystem& system, std::span<const double> y,
                                BandMatrix& jac);

/// Adapts a callable to OdeSystem. Without bandwidths the Jacobian is dense.
class FunctionSystem final : public OdeSystem {
public:
  using Rhs = std::function<void(std::span<const double>, std::span<double>)>;
  using Jacobian = std::function<void(std::span<const double>, BandMatrix&)>;

  FunctionSystem(std::size_t n, Rhs rhs);
  FunctionSystem(std::size_t n, std::size_t lower, std::size_t upper, Rhs rhs,
                 Jacobian jacobian = {});

  std::size_t size() const override { return n_; }
  std::size_t lower_bandwidth() const override { return lower_; }
  std::size_t upper_bandwidth() const override { return upper_; }
  void rhs(std::span<const double> y, std::span<double> dydt) const override { rhs_(y, dydt); }
  void jacobian(std::span<const double> y, BandMatrix& jac) const override;

private:
  std::size_t n_;
  std::size_t lower_;
  std::size_t upper_;
  Rhs rhs_;
  Jacobian jacobian_;
};

}  // namespace qssmm
