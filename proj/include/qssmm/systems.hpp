#pragma once

#include <string>
#include <vector>

#include "qssmm/grid.hpp"
#include "qssmm/models.hpp"
#include "qssmm/ode_system.hpp"

namespace qssmm {

/// Method-of-lines discretization of a spatial model kind with the species of
/// each cell stored contiguously: y[cell * species() + k]. With this layout
/// diffusion and cell-local reactions give a narrow band.
///
/// Instances keep scratch buffers: one instance per integration.
class MethodOfLinesSystem final : public OdeSystem {
public:
  MethodOfLinesSystem(ModelSpec spec, Grid1D grid);

  const ModelSpec& spec() const noexcept { return spec_; }
  const Grid1D& grid() const noexcept { return lap_.grid(); }
  const DiscreteLaplacian& laplacian() const noexcept { return lap_; }

  std::size_t species() const noexcept { return species_; }
  /// Names in storage order, e.g. {"s", "c_star", "y_star"}.
  std::vector<std::string> species_names() const;
  /// Index of a species in storage order, or species() if absent.
  std::size_t species_index(const std::string& name) const;

  std::size_t size() const override { return species_ * lap_.size(); }
  std::size_t lower_bandwidth() const override { return bandwidth_; }
  std::size_t upper_bandwidth() const override { return bandwidth_; }

  void rhs(std::span<const double> y, std::span<double> dydt) const override;
  void jacobian(std::span<const double> y, BandMatrix& jac) const override;

  std::vector<double> pack(const FullState& state) const;
  std::vector<double> pack(const ReducedState& state) const;
  std::vector<double> pack(const SlowComplexState& state) const;
  FullState unpack_full(std::span<const double> y) const;
  ReducedState unpack_reduced(std::span<const double> y) const;
  SlowComplexState unpack_slow_complex(std::span<const double> y) const;

  /// Values of species `k` over all cells.
  Field extract(std::span<const double> y, std::size_t k) const;

private:
  void gather(std::span<const double> y) const;
  void scatter(std::span<double> dydt) const;
  void add_diffusion(BandMatrix& jac, std::size_t row_species, std::size_t col_species,
                     double coefficient) const;

  ModelSpec spec_;
  DiscreteLaplacian lap_;
  std::size_t species_;
  std::size_t bandwidth_;
  mutable std::vector<Field> in_;
  mutable std::vector<Field> out_;
  mutable Field scratch_;
};

/// Spatially homogeneous models: (s, c) for HomogeneousFullIrrev with the
/// unscaled complex c, or s alone for the reduced kinds.
class HomogeneousSystem final : public OdeSystem {
public:
  /// `s0` is only used by HomogeneousReducedRev.
  HomogeneousSystem(ModelSpec spec, double e0_star, double s0 = 0.0);

  std::size_t size() const override;
  std::size_t lower_bandwidth() const override { return size() - 1; }
  std::size_t upper_bandwidth() const override { return size() - 1; }
  void rhs(std::span<const double> y, std::span<double> dydt) const override;

private:
  ModelSpec spec_;
  double e0_star_;
  double s0_;
};

}  // namespace qssmm
