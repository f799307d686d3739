#include "reins/hjb.hpp"

#include <algorithm>
#include <cmath>

#include "reins/parallel.hpp"
#include "reins/quadrature.hpp"

namespace reins {

namespace {

std::vector<double> candidate_controls(int control_grid_size) {
  if (control_grid_size < 1) throw DomainError("control_grid_size must be at least 1");
  if (control_grid_size == 1) return {1.0};
  std::vector<double> u(static_cast<std::size_t>(control_grid_size));
  const double step = 1.0 / (control_grid_size - 1);
  for (int k = 0; k < control_grid_size; ++k) u[static_cast<std::size_t>(k)] = k * step;
  u.back() = 1.0;
  return u;
}

// Scores controls at a single node with the discretization used by
// policy_evaluate, so that improving a row of the evaluated system is exactly
// a decrease of this score.
class NodeScore {
 public:
  NodeScore(const GridFunction& phi, const Model& model, Index i) : phi_(phi), model_(model), i_(i) {
    const auto& p = model.params;
    smooth_ruin_node_ = i == 0 && phi.grid().lo() == 0.0;
    if (smooth_ruin_node_) smooth_ruin_score_ = (p.delta + p.lambda) * (model.penalty(0.0, 0.0) - phi[0]);
  }

  double operator()(double u) const {
    const double c = premium(model_.params, u);
    if (smooth_ruin_node_ && c < 0.0) return smooth_ruin_score_;
    const double h = edge_without_upstream(c) ? edge_score(u) : discrete_hamiltonian(phi_, i_, u, model_);
    if (!std::isfinite(h)) throw QuadratureError("hamiltonian is not finite", phi_.grid().node(i_), u);
    return h;
  }

  // Dirichlet edge nodes whose drift points out of the grid. Only the control
  // reported there depends on this score; it uses the inward difference.
  bool edge_without_upstream(double c) const {
    return (i_ == 0 && c < 0.0) || (i_ == phi_.grid().last() && c > 0.0);
  }

  double edge_score(double u) const {
    const Grid& g = phi_.grid();
    const Index inner = i_ == 0 ? 1 : i_ - 1;
    const double df = (phi_[i_] - phi_[inner]) / (g.node(i_) - g.node(inner));
    return hamiltonian(phi_, df, g.node(i_), u, model_);
  }

  bool smooth_ruin(double u) const { return smooth_ruin_node_ && premium(model_.params, u) < 0.0; }

 private:
  const GridFunction& phi_;
  const Model& model_;
  Index i_;
  bool smooth_ruin_node_ = false;
  double smooth_ruin_score_ = 0.0;
};

struct Best {
  double u = 1.0;
  double score = kInfinity;

  void offer(double candidate, double s) {
    if (s < score || (s == score && candidate > u)) {
      u = candidate;
      score = s;
    }
  }
};

Best golden_section(const NodeScore& score, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = score(c);
  double fd = score(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = score(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = score(d);
    }
  }
  Best best;
  best.offer(c, fc);
  best.offer(d, fd);
  return best;
}

}  // namespace

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::ToleranceMet:
      return "tolerance-met";
    case StopReason::MaxIters:
      return "max-iters";
    default:
      return "stagnation";
  }
}

Improvement improve(const GridFunction& phi, const Model& model, const ImprovementOptions& options,
                    const Strategy* incumbent) {
  const Grid& grid = phi.grid();
  if (incumbent && !(incumbent->grid() == grid)) throw DomainError("incumbent strategy lives on another grid");
  const auto candidates = candidate_controls(options.control_grid_size);
  const double width = candidates.size() > 1 ? 1.0 / (options.control_grid_size - 1) : 0.0;
  const Index n = grid.size();
  Eigen::VectorXd controls(n);
  Eigen::VectorXd minimum = Eigen::VectorXd::Zero(n);

  parallel_for(static_cast<std::size_t>(n), options.threads, [&](std::size_t row) {
    const auto i = static_cast<Index>(row);
    const NodeScore score(phi, model, i);
    Best best;
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) best.offer(*it, score(*it));
    if (incumbent) best.offer((*incumbent)[i], score((*incumbent)[i]));
    if (width > 0.0 && options.refine_tol > 0.0) {
      const Best refined = golden_section(score, std::max(0.0, best.u - width), std::min(1.0, best.u + width),
                                          options.refine_tol);
      if (refined.score < best.score) best = refined;
    }
    controls[i] = score.smooth_ruin(best.u) ? 0.0 : best.u;
    if (i != 0 && i != grid.last()) minimum[i] = best.score;
  });
  return {Strategy(grid, std::move(controls)), GridFunction(grid, std::move(minimum))};
}

Strategy policy_improve(const GridFunction& phi, const Model& model, const ImprovementOptions& options,
                        const Strategy* incumbent) {
  return improve(phi, model, options, incumbent).strategy;
}

GridFunction hjb_residual(const GridFunction& v, const Model& model, const ImprovementOptions& options) {
  return improve(v, model, options).minimum;
}

PolicyIterationError::PolicyIterationError(const std::string& what, PolicyIterationReport partial)
    : std::runtime_error(what), partial_(std::move(partial)) {}

PolicyIterationReport policy_iteration(const Strategy& initial, const Model& model,
                                       const BoundaryProvider& boundary,
                                       const PolicyIterationConfig& config) {
  if (config.max_iters < 1) throw DomainError("max_iters must be at least 1");
  PolicyIterationReport report;
  Strategy strategy = initial;
  double previous_upper = kInfinity;
  for (int k = 1; k <= config.max_iters; ++k) {
    BoundaryData data = boundary(strategy);
    if (config.monotone_boundary) data.upper = std::min(data.upper, previous_upper);
    std::optional<GridFunction> value;
    try {
      value.emplace(policy_evaluate(strategy, model, data, config.improvement.threads));
    } catch (const std::exception& e) {
      throw PolicyIterationError(std::string("policy evaluation failed: ") + e.what(), report);
    }
    Improvement next = improve(*value, model, config.improvement, &strategy);
    const double residual = next.minimum.values().cwiseAbs().maxCoeff();
    const double change =
        report.iterates.empty() ? kInfinity
                                : (value->values() - report.iterates.back().value.values()).cwiseAbs().maxCoeff();
    if (report.iterates.empty()) {
      const double scale = std::max(value->values().cwiseAbs().maxCoeff(), 1e-12);
      report.tol_value = config.tol_value.value_or(1e-5 * scale);
      report.tol_residual = config.tol_residual.value_or(1e-3 * (model.params.delta + model.params.lambda) * scale);
    }
    report.iterates.push_back({strategy, *value, data, residual, change});
    if (change < report.tol_value && residual < report.tol_residual) {
      report.converged = true;
      report.stop_reason = StopReason::ToleranceMet;
      return report;
    }
    if (next.strategy == strategy) {
      // re-evaluating would reproduce the same value
      report.converged = residual < report.tol_residual;
      report.stop_reason = report.converged ? StopReason::ToleranceMet : StopReason::Stagnation;
      return report;
    }
    previous_upper = data.upper;
    strategy = std::move(next.strategy);
  }
  report.stop_reason = StopReason::MaxIters;
  return report;
}

}  // namespace reins
