#include "reins/boundary.hpp"

namespace reins {

BoundaryProvider monte_carlo_boundary(const Model& model, const McConfig& mc, std::optional<double> fixed_lower,
                                      std::optional<double> fixed_upper) {
  return [model, mc, fixed_lower, fixed_upper](const Strategy& strategy) {
    const Grid& grid = strategy.grid();
    BoundaryData data;
    data.upper = fixed_upper ? *fixed_upper : mc_estimate(grid.hi(), strategy, model, mc).mean;
    if (fixed_lower) {
      data.lower = fixed_lower;
    } else if (grid.lo() > 0.0 && premium(model.params, strategy[0]) < 0.0) {
      data.lower = mc_estimate(grid.lo(), strategy, model, mc).mean;
    }
    return data;
  };
}

}  // namespace reins
