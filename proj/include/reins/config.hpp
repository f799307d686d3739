#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reins/grid.hpp"
#include "reins/hjb.hpp"
#include "reins/model.hpp"
#include "reins/simulator.hpp"

namespace reins {

/// Invalid or unreadable run configuration; `field` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct GridConfig {
  double x_lo = 0.0;
  double x_hi = 14.0;
  Index n_points = 1401;
};

struct SolverConfig {
  std::optional<double> tol_value;
  std::optional<double> tol_residual;
  int max_iters = 20;
  int control_grid_size = 101;
  double refine_tol = 1e-4;
  /// Fixed Dirichlet data; when absent it is estimated by Monte Carlo.
  std::optional<double> phi_lo;
  std::optional<double> phi_hi;
};

/// A full run description, loaded from a JSON document of the form
///
///   { "model":   {"lambda", "beta", "eta", "theta", "delta"},
///     "claims":  {"kind": "exponential", "rate"} | {"kind": "pareto", "shape"},
///     "penalty": {"kind": "w1" | "w2"},
///     "grid":    {"x_lo", "x_hi", "n_points"},
///     "solver":  {"tol_value", "tol_residual", "max_iters", "control_grid_size",
///                 "refine_tol", "phi_lo", "phi_hi"},
///     "mc":      {"n_paths", "horizon", "abs_tol", "seed"},
///     "asymptotics": {"deltas": [...]},
///     "output":  "dir" }
///
/// Only "model" and "claims" are required. Unknown keys are rejected.
struct RunConfig {
  ModelParams params;
  ClaimDistribution claims = ClaimDistribution::exponential(1.0);
  PenaltyFunction::Kind penalty = PenaltyFunction::Kind::W1;
  GridConfig grid;
  SolverConfig solver;
  McConfig mc;
  std::vector<double> asymptotic_deltas;
  std::string output = "out";

  Model model() const;
  Grid make_grid() const;
  PolicyIterationConfig policy_iteration_config(unsigned threads) const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Canonical JSON text of a configuration with every default spelled out.
std::string normalized_config(const RunConfig& config);

}  // namespace reins
