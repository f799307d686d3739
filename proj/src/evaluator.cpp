#include "reins/evaluator.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "reins/parallel.hpp"
#include "reins/quadrature.hpp"

namespace reins {

EvaluationError::EvaluationError(const std::string& what, std::vector<Index> nodes)
    : std::runtime_error(what), nodes_(std::move(nodes)) {}

double hamiltonian(const GridFunction& f, double df, double x, double u, const Model& model) {
  const auto& p = model.params;
  const double survival = survival_integral(f, x, u, model.claims, model.retention);
  const double ruin = ruin_integral(model.penalty, x, u, model.claims, model.retention);
  return premium(p, u) * df - (p.delta + p.lambda) * f(x) + p.lambda * (survival + ruin);
}

CellScheme cell_scheme(const Grid& grid, Index i, double drift, const ModelParams& params) {
  const double k = params.delta + params.lambda;
  if (drift == 0.0) return {i, k, 0.0, 1.0, 0.0};
  const Index up = drift > 0.0 ? i + 1 : i - 1;
  if (up < 0 || up > grid.last()) throw DomainError("no upstream neighbour at the grid edge");
  // a = decay over the time the drift needs to cross one cell
  const double a = k * grid.spacing() / std::abs(drift);
  // 1/a - 1/(e^a - 1), the weight of the far end of the cell
  const double far = a < 1e-4 ? 0.5 - a / 12.0 : 1.0 / a - 1.0 / std::expm1(a);
  return {up, -k / std::expm1(-a), k / std::expm1(a), 1.0 - far, far};
}

double discrete_hamiltonian(const GridFunction& f, Index i, double u, const Model& model) {
  const auto& p = model.params;
  const Grid& g = f.grid();
  const CellScheme s = cell_scheme(g, i, premium(p, u), p);
  auto integrals = [&](Index j) {
    const double x = g.node(j);
    return survival_integral(f, x, u, model.claims, model.retention) +
           ruin_integral(model.penalty, x, u, model.claims, model.retention);
  };
  double value = s.upstream_coeff * f[s.upstream] - s.self_coeff * f[i] + p.lambda * s.near_weight * integrals(i);
  if (s.far_weight > 0.0) value += p.lambda * s.far_weight * integrals(s.upstream);
  return value;
}

bool is_dirichlet_node(const Grid& grid, Index i, double drift) {
  return i == grid.last() || (i == 0 && drift < 0.0);
}

GridFunction policy_evaluate(const Strategy& strategy, const Model& model, const BoundaryData& boundary,
                             unsigned threads) {
  const Grid& grid = strategy.grid();
  const auto& p = model.params;
  const Index n = grid.size();
  const double h = grid.spacing();
  const double bound = model.penalty.bound();

  if (!(boundary.upper >= 0.0 && boundary.upper <= bound)) {
    std::ostringstream os;
    os << "upper boundary value " << boundary.upper << " outside [0, " << bound << "]";
    throw EvaluationError(os.str(), {grid.last()});
  }
  const double c0 = premium(p, strategy[0]);
  double lower = 0.0;
  if (c0 < 0.0) {
    if (boundary.lower) {
      lower = *boundary.lower;
    } else if (grid.lo() == 0.0) {
      lower = model.penalty(0.0, 0.0);
    } else {
      throw EvaluationError("negative drift at the lowest node needs a lower boundary value", {0});
    }
    if (!(lower >= 0.0 && lower <= bound)) {
      std::ostringstream os;
      os << "lower boundary value " << lower << " outside [0, " << bound << "]";
      throw EvaluationError(os.str(), {0});
    }
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b(n);
  std::vector<char> dirichlet(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t row) {
    const auto i = static_cast<Index>(row);
    const double u = strategy[i];
    const double c = premium(p, u);
    if (is_dirichlet_node(grid, i, c)) {
      dirichlet[row] = 1;
      a(i, i) = 1.0;
      b[i] = i == grid.last() ? boundary.upper : lower;
      return;
    }
    const CellScheme cell = cell_scheme(grid, i, c, p);
    a(i, i) -= cell.self_coeff;
    a(i, cell.upstream) += cell.upstream_coeff;
    b[i] = 0.0;
    for (const auto& [j, weight] : {std::pair{i, cell.near_weight}, std::pair{cell.upstream, cell.far_weight}}) {
      if (weight == 0.0) continue;
      const double x = grid.node(j);
      visit_survival_weights(grid, x, u, model.claims, [&](Index m, double w) { a(i, m) += p.lambda * weight * w; });
      b[i] -= p.lambda * weight * ruin_integral(model.penalty, x, u, model.claims, model.retention);
    }
  });

  std::vector<Index> bad;
  for (Index i = 0; i < n; ++i) {
    if (dirichlet[static_cast<std::size_t>(i)]) continue;
    const double diag = a(i, i);
    const double off = a.row(i).cwiseAbs().sum() - std::abs(diag);
    if (!(diag < 0.0) || -diag < off * (1.0 - 1e-12)) bad.push_back(i);
  }
  if (!bad.empty()) {
    std::ostringstream os;
    os << "evaluation system is not diagonally dominant at " << bad.size() << " node(s), first at x="
       << grid.node(bad.front());
    throw EvaluationError(os.str(), bad);
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd phi = lu.solve(b);
  if (!phi.allFinite()) throw EvaluationError("evaluation system is singular", {});
  // the LU solve reproduces Dirichlet rows only up to rounding
  for (Index i = 0; i < n; ++i) {
    if (dirichlet[static_cast<std::size_t>(i)]) phi[i] = b[i];
  }
  return GridFunction(grid, std::move(phi));
}

}  // namespace reins
