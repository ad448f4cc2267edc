#include "qssmm/ode_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qssmm/errors.hpp"

namespace qssmm {

void OdeSystem::jacobian(std::span<const double> y, BandMatrix& jac) const {
  finite_difference_jacobian(*this, y, jac);
}

void finite_difference_jacobian(const OdeSystem& system, std::span<const double> y,
                                BandMatrix& jac) {
  const std::size_t n = system.size();
  if (y.size() != n || jac.size() != n) throw DimensionError("jacobian: size mismatch");
  const std::size_t kl = system.lower_bandwidth();
  const std::size_t ku = system.upper_bandwidth();
  const std::size_t groups = std::min(n, kl + ku + 1);

  std::vector<double> f0(n), f1(n), yp(y.begin(), y.end()), step(n);
  system.rhs(y, f0);
  jac.set_zero();
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());

  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t j = g; j < n; j += groups) {
      step[j] = root_eps * std::max(1.0, std::abs(y[j]));
      yp[j] = y[j] + step[j];
      step[j] = yp[j] - y[j];
    }
    system.rhs(yp, f1);
    for (std::size_t j = g; j < n; j += groups) {
      const std::size_t lo = j > ku ? j - ku : 0;
      const std::size_t hi = std::min(n - 1, j + kl);
      for (std::size_t i = lo; i <= hi; ++i) jac(i, j) = (f1[i] - f0[i]) / step[j];
      yp[j] = y[j];
    }
  }
}

FunctionSystem::FunctionSystem(std::size_t n, Rhs rhs)
    : FunctionSystem(n, n == 0 ? 0 : n - 1, n == 0 ? 0 : n - 1, std::move(rhs)) {}

FunctionSystem::FunctionSystem(std::size_t n, std::size_t lower, std::size_t upper, Rhs rhs,
                               Jacobian jacobian)
    : n_(n), lower_(lower), upper_(upper), rhs_(std::move(rhs)), jacobian_(std::move(jacobian)) {
  if (!rhs_) throw std::invalid_argument("FunctionSystem needs a right-hand side");
}

void FunctionSystem::jacobian(std::span<const double> y, BandMatrix& jac) const {
  if (jacobian_) {
    jac.set_zero();
    jacobian_(y, jac);
  } else {
    finite_difference_jacobian(*this, y, jac);
  }
}

}  // namespace qssmm
