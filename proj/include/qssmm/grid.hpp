#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qssmm {

/// Concentration values of one species, one entry per grid cell.
using Field = std::vector<double>;

/// Uniform partition of (0, L) into N compartments. The mesh size is always
/// derived from L and N.
class Grid1D {
public:
  Grid1D(double length, std::size_t cell_count);

  double length() const noexcept { return length_; }
  std::size_t cell_count() const noexcept { return cell_count_; }
  double mesh() const noexcept { return length_ / static_cast<double>(cell_count_); }

  /// Center of cell `alpha` (0-based), i.e. (alpha + 1/2) * mesh.
  double center(std::size_t alpha) const noexcept {
    return (static_cast<double>(alpha) + 0.5) * mesh();
  }
  std::vector<double> centers() const;

private:
  double length_;
  std::size_t cell_count_;
};

/// Neumann finite-difference Laplacian on a Grid1D.
///
/// Row alpha is (z[alpha-1] - 2 z[alpha] + z[alpha+1]) / rho^2 with the ghost
/// cells z[-1] = z[0] and z[N] = z[N-1]. The operator is a W-matrix: zero row
/// sums, nonnegative off-diagonals, symmetric. It is kept in stencil form and
/// never assembled.
class DiscreteLaplacian {
public:
  explicit DiscreteLaplacian(Grid1D grid);

  const Grid1D& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.cell_count(); }

  /// 1 / rho^2.
  double inverse_mesh_squared() const noexcept { return inv_rho2_; }

  double diagonal(std::size_t alpha) const noexcept;
  /// Coupling between alpha and alpha + 1 (equal to the one between alpha + 1 and alpha).
  double off_diagonal(std::size_t alpha) const noexcept;
  /// Matrix entry (row, col); zero outside the tridiagonal band.
  double entry(std::size_t row, std::size_t col) const noexcept;

  /// out = D f.
  void apply(std::span<const double> f, std::span<double> out) const;
  /// out += scale * D f.
  void apply_add(double scale, std::span<const double> f, std::span<double> out) const;

private:
  Grid1D grid_;
  double inv_rho2_;
};

DiscreteLaplacian build_laplacian(const Grid1D& grid);

/// Returns D f. Throws DimensionError when f does not match the grid.
Field apply_laplacian(const DiscreteLaplacian& lap, const Field& f);

}  // namespace qssmm
