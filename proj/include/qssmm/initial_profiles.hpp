#pragma once

#include "qssmm/grid.hpp"
#include "qssmm/models.hpp"

namespace qssmm {

/// Initial-profile family: a step in s, a raised cosine in c*, and a raised
/// cosine plus Gaussian bump in y*. Positions and widths are fractions of L.
///
///   s(x)  = s_low + (s_high - s_low) * [x >= step_position * L]
///   c*(x) = max(0, c_amplitude * (1 + cos(2 pi x / L)) / 2 + c_offset)
///   y*(x) = y_amplitude * (1 + cos(2 pi x / L)) / 2 + y_offset
///           + bump_amplitude * exp(-(x - bump_center L)^2 / (2 (bump_width L)^2))
///   p(x)  = p_value   (reversible only)
struct InitialConditionSpec {
  double s_low = 0.5;
  double s_high = 1.5;
  double step_position = 0.5;
  double c_amplitude = 0.5;
  double c_offset = 0.0;
  double y_amplitude = 0.5;
  double y_offset = 0.5;
  double bump_amplitude = 0.5;
  double bump_center = 0.7;
  double bump_width = 0.05;
  double p_value = 0.0;

  void validate() const;
};

/// Samples the profile family at the cell centers. Throws ConfigError when
/// y* < c* or any field is negative somewhere.
FullState build_initial_profiles(const InitialConditionSpec& spec, const Grid1D& grid,
                                 bool reversible);

}  // namespace qssmm
