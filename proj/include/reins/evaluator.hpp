#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reins/grid.hpp"
#include "reins/model.hpp"

namespace reins {

/// The assembled evaluation system is singular or not diagonally dominant.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::vector<Index> nodes);
  const std::vector<Index>& nodes() const { return nodes_; }

 private:
  std::vector<Index> nodes_;
};

/// Dirichlet data for the Feynman-Kac equation. `lower` is only used when the
/// drift at the lowest node is negative; when it is absent and the grid starts
/// at 0, the smooth-ruin value w(0, 0) is imposed.
struct BoundaryData {
  std::optional<double> lower;
  double upper = 0.0;
};

/// c(u)*df - (delta + lambda)*f(x) + lambda*(survival + ruin integrals).
double hamiltonian(const GridFunction& f, double df, double x, double u, const Model& model);

/// Upwind discretization of the drift at one node. Along the drift the
/// equation is an ODE that is integrated exactly over the cell towards the
/// upstream node, with the integral terms interpolated linearly between the
/// two cell ends. The discrete operator at node i is
///   upstream_coeff * f(upstream) - self_coeff * f(i)
///     + lambda * (near_weight * S(x_i) + far_weight * S(x_upstream)),
/// S being survival plus ruin integral under the node's control. It tends to
/// the Hamiltonian as the spacing shrinks and stays monotone for any drift.
struct CellScheme {
  Index upstream;
  double self_coeff;
  double upstream_coeff;
  double near_weight;
  double far_weight;
};

/// Scheme at node i for the given drift. Zero drift leaves the algebraic
/// relation (upstream == i, upstream_coeff == 0). Needs a neighbour in the
/// drift direction.
CellScheme cell_scheme(const Grid& grid, Index i, double drift, const ModelParams& params);

/// The discrete operator above applied to f at node i with control u.
double discrete_hamiltonian(const GridFunction& f, Index i, double u, const Model& model);

/// Whether node i carries Dirichlet data instead of the equation.
bool is_dirichlet_node(const Grid& grid, Index i, double drift);

/// Solves the linear Feynman-Kac equation of a fixed Markov strategy on the
/// strategy's grid with the upwind cell scheme.
GridFunction policy_evaluate(const Strategy& strategy, const Model& model, const BoundaryData& boundary,
                             unsigned threads = 0);

}  // namespace reins
