#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reins/evaluator.hpp"
#include "reins/grid.hpp"
#include "reins/model.hpp"

namespace reins {

/// How the pointwise argmin over the control set is searched.
struct ImprovementOptions {
  /// Uniform candidates on [0, 1]; a single candidate means the control set {1}.
  int control_grid_size = 101;
  /// Golden-section refinement width around the best candidate (0 disables).
  double refine_tol = 1e-4;
  unsigned threads = 0;
};

/// Pointwise minimizer of the Hamiltonian and the attained minimum.
struct Improvement {
  Strategy strategy;
  /// min over u of the Hamiltonian at each node; 0 at Dirichlet nodes.
  GridFunction minimum;
};

/// Argmin of the Hamiltonian of `phi` at every node, with the derivative
/// recomputed upwind for each candidate control. Ties go to the larger
/// control. When `incumbent` is given its control competes as a candidate.
///
/// At a lowest node x = 0 every control with negative premium means
/// immediate smooth ruin; that option is scored as (delta + lambda) *
/// (w(0,0) - phi(0)) and reported as full reinsurance u = 0.
Improvement improve(const GridFunction& phi, const Model& model, const ImprovementOptions& options,
                    const Strategy* incumbent = nullptr);

/// Strategy part of improve().
Strategy policy_improve(const GridFunction& phi, const Model& model, const ImprovementOptions& options,
                        const Strategy* incumbent = nullptr);

/// min over the control set of the Hamiltonian at every interior node;
/// boundary nodes report 0.
GridFunction hjb_residual(const GridFunction& v, const Model& model, const ImprovementOptions& options);

/// Supplies Dirichlet data for the evaluation of a strategy.
using BoundaryProvider = std::function<BoundaryData(const Strategy&)>;

struct PolicyIterationConfig {
  /// Stop thresholds. When unset they default to 1e-5*S and 1e-3*(delta+lambda)*S,
  /// with S the largest value of the first iterate.
  std::optional<double> tol_value;
  std::optional<double> tol_residual;
  int max_iters = 20;
  ImprovementOptions improvement;
  /// Never let the upper boundary value increase between iterations.
  bool monotone_boundary = true;
};

enum class StopReason { ToleranceMet, MaxIters, Stagnation };

std::string to_string(StopReason reason);

struct Iterate {
  Strategy strategy;
  GridFunction value;
  BoundaryData boundary;
  double max_residual;
  /// sup |value - previous value|; +inf for the first iterate.
  double sup_change;
};

struct PolicyIterationReport {
  std::vector<Iterate> iterates;
  bool converged = false;
  StopReason stop_reason = StopReason::MaxIters;
  double tol_value = 0.0;
  double tol_residual = 0.0;

  const Iterate& final() const { return iterates.back(); }
};

/// Evaluation failed mid-run; the iterates computed so far are attached.
class PolicyIterationError : public std::runtime_error {
 public:
  PolicyIterationError(const std::string& what, PolicyIterationReport partial);
  const PolicyIterationReport& partial() const { return partial_; }

 private:
  PolicyIterationReport partial_;
};

/// Alternates policy evaluation and improvement starting from `initial`.
PolicyIterationReport policy_iteration(const Strategy& initial, const Model& model,
                                       const BoundaryProvider& boundary,
                                       const PolicyIterationConfig& config);

}  // namespace reins
