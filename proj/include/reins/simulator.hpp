#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <variant>
#include <vector>

#include "reins/grid.hpp"
#include "reins/model.hpp"

namespace reins {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Independent random stream for one simulated path. Streams are keyed by
/// (seed, index) so results do not depend on how paths are scheduled.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index);

  /// Uniform variate in the open interval (0, 1).
  double uniform();
  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  std::mt19937_64 engine_;
};

/// Deterministic reserve motion dx/dt = c(u(x)) between claims.
///
/// With linear interpolation of the control, the drift is affine on every
/// grid cell, so the flow has a closed form on each cell. Traversal times of
/// whole cells are accumulated once, so a step costs a binary search plus one
/// partial cell at each end. Below the grid and above it the drift is the
/// constant end value.
class DriftFlow {
 public:
  DriftFlow(const Strategy& strategy, const ModelParams& params);

  struct Step {
    double x;        ///< reserve after the step
    double elapsed;  ///< time actually spent
    bool hit_zero;   ///< the reserve reached 0 (smooth ruin)
  };

  const Strategy& strategy() const { return strategy_; }
  double drift(double x) const;

  /// Follows the flow from x for at most dt; stops early at 0.
  Step advance(double x, double dt) const;

 private:
  double slope(Index k) const { return (c_[k + 1] - c_[k]) / h_; }

  const Strategy& strategy_;
  Grid grid_;
  double h_;
  std::vector<double> c_;  // drift at the nodes
  // up_[j] - up_[i]: time from node i to node j > i moving upwards; valid
  // while j <= up_reach_[i]. down_ and down_reach_ mirror this downwards.
  std::vector<double> up_;
  std::vector<Index> up_reach_;
  std::vector<double> down_;
  std::vector<Index> down_reach_;
};

struct ClaimRuin {
  double time;
  double surplus_prior;
  double deficit;
};

struct SmoothRuin {
  double time;
};

struct Survived {
  double horizon;
};

struct PathOutcome {
  std::variant<ClaimRuin, SmoothRuin, Survived> event;
  double discounted_penalty = 0.0;

  bool ruined() const { return !std::holds_alternative<Survived>(event); }
};

/// Exact event-driven simulation of one path of the controlled reserve,
/// truncated at `horizon`.
PathOutcome simulate_path(double x0, const Strategy& strategy, const Model& model, double horizon,
                          RandomStream& rng);
PathOutcome simulate_path(double x0, const DriftFlow& flow, const Model& model, double horizon, RandomStream& rng);

struct McConfig {
  std::int64_t n_paths = 1'000'000;
  /// Defaults to the smallest horizon with exp(-delta*T)*M < abs_tol/2.
  std::optional<double> horizon;
  double abs_tol = 1e-5;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_paths = 0;
  double horizon = 0.0;
  double truncation_bound = 0.0;

  bool operator==(const McEstimate&) const = default;
};

/// Horizon T with exp(-delta*T)*bound = abs_tol/2. Needs delta > 0.
double horizon_for_tolerance(double delta, double bound, double abs_tol);

/// Monte Carlo estimate of E[exp(-delta*tau) w(X_{tau-}, |X_tau|); tau < T].
McEstimate mc_estimate(double x0, const Strategy& strategy, const Model& model, const McConfig& config);

}  // namespace reins
