#pragma once

#include <optional>

#include "reins/hjb.hpp"
#include "reins/simulator.hpp"

namespace reins {

/// Dirichlet data estimated by Monte Carlo under the strategy being evaluated.
/// Fixed values, when given, take precedence. A lower value is only produced
/// when the grid starts above 0 and the drift at its first node is negative;
/// otherwise the evaluator's own default applies.
BoundaryProvider monte_carlo_boundary(const Model& model, const McConfig& mc, std::optional<double> fixed_lower = {},
                                      std::optional<double> fixed_upper = {});

}  // namespace reins
