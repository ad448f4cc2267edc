#include "qssmm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qssmm/errors.hpp"
#include "qssmm/simd/kernels.hpp"

namespace qssmm {

Grid1D::Grid1D(double length, std::size_t cell_count) : length_(length), cell_count_(cell_count) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ConfigError("grid length must be positive and finite", "grid.length");
  }
  if (cell_count < 1) {
    throw ConfigError("grid needs at least one cell", "grid.cells");
  }
}

std::vector<double> Grid1D::centers() const {
  std::vector<double> x(cell_count_);
  for (std::size_t a = 0; a < cell_count_; ++a) x[a] = center(a);
  return x;
}

DiscreteLaplacian::DiscreteLaplacian(Grid1D grid) : grid_(grid) {
  const double rho = grid_.mesh();
  inv_rho2_ = 1.0 / (rho * rho);
}

double DiscreteLaplacian::diagonal(std::size_t alpha) const noexcept {
  const std::size_t n = size();
  if (n == 1) return 0.0;
  const bool boundary = alpha == 0 || alpha + 1 == n;
  return (boundary ? -1.0 : -2.0) * inv_rho2_;
}

double DiscreteLaplacian::off_diagonal(std::size_t alpha) const noexcept {
  return alpha + 1 < size() ? inv_rho2_ : 0.0;
}

double DiscreteLaplacian::entry(std::size_t row, std::size_t col) const noexcept {
  if (row == col) return diagonal(row);
  if (row + 1 == col) return off_diagonal(row);
  if (col + 1 == row) return off_diagonal(col);
  return 0.0;
}

void DiscreteLaplacian::apply(std::span<const double> f, std::span<double> out) const {
  if (f.size() != size() || out.size() != size()) {
    throw DimensionError("Laplacian: field length " + std::to_string(f.size()) +
                         " does not match grid with " + std::to_string(size()) + " cells");
  }
  std::fill(out.begin(), out.end(), 0.0);
  simd::active().laplacian_accumulate(f.data(), out.data(), f.size(), inv_rho2_);
}

void DiscreteLaplacian::apply_add(double scale, std::span<const double> f,
                                  std::span<double> out) const {
  if (f.size() != size() || out.size() != size()) {
    throw DimensionError("Laplacian: field length " + std::to_string(f.size()) +
                         " does not match grid with " + std::to_string(size()) + " cells");
  }
  if (scale == 0.0) return;
  simd::active().laplacian_accumulate(f.data(), out.data(), f.size(), scale * inv_rho2_);
}

DiscreteLaplacian build_laplacian(const Grid1D& grid) { return DiscreteLaplacian(grid); }

Field apply_laplacian(const DiscreteLaplacian& lap, const Field& f) {
  Field out(f.size());
  lap.apply(f, out);
  return out;
}

}  // namespace qssmm
