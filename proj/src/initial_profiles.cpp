#include "qssmm/initial_profiles.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qssmm/errors.hpp"

namespace qssmm {
namespace {

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw ConfigError(std::string(field) + " must be finite", field);
}

}  // namespace

void InitialConditionSpec::validate() const {
  require_finite(s_low, "initial_condition.s_low");
  require_finite(s_high, "initial_condition.s_high");
  require_finite(step_position, "initial_condition.step_position");
  require_finite(c_amplitude, "initial_condition.c_amplitude");
  require_finite(c_offset, "initial_condition.c_offset");
  require_finite(y_amplitude, "initial_condition.y_amplitude");
  require_finite(y_offset, "initial_condition.y_offset");
  require_finite(bump_amplitude, "initial_condition.bump_amplitude");
  require_finite(bump_center, "initial_condition.bump_center");
  require_finite(bump_width, "initial_condition.bump_width");
  require_finite(p_value, "initial_condition.p_value");
  if (s_low < 0.0 || s_high < 0.0) {
    throw ConfigError("substrate levels must be nonnegative", "initial_condition.s_low");
  }
  if (!(bump_width > 0.0)) {
    throw ConfigError("bump width must be positive", "initial_condition.bump_width");
  }
  if (p_value < 0.0) {
    throw ConfigError("product level must be nonnegative", "initial_condition.p_value");
  }
}

FullState build_initial_profiles(const InitialConditionSpec& spec, const Grid1D& grid,
                                 bool reversible) {
  spec.validate();
  const std::size_t n = grid.cell_count();
  const double length = grid.length();
  const double step_x = spec.step_position * length;
  const double bump_x = spec.bump_center * length;
  const double sigma = spec.bump_width * length;

  FullState state{Field(n), Field(n), Field(n), reversible ? Field(n, spec.p_value) : Field{}};
  for (std::size_t a = 0; a < n; ++a) {
    const double x = grid.center(a);
    const double raised_cos = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * x / length));
    state.s[a] = x >= step_x ? spec.s_high : spec.s_low;
    const double c = spec.c_amplitude * raised_cos + spec.c_offset;
    state.c_star[a] = c > 0.0 ? c : 0.0;
    const double dx = x - bump_x;
    state.y_star[a] = spec.y_amplitude * raised_cos + spec.y_offset +
                      spec.bump_amplitude * std::exp(-dx * dx / (2.0 * sigma * sigma));
    if (state.y_star[a] < state.c_star[a]) {
      throw ConfigError("initial y* falls below c* at cell " + std::to_string(a + 1) +
                            " (free enzyme would be negative)",
                        "initial_condition");
    }
  }
  return state;
}

}  // namespace qssmm
