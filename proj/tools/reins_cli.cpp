// Command-line front end: solve | evaluate | simulate | asymptotics | config.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reins/asymptotics.hpp"
#include "reins/boundary.hpp"
#include "reins/config.hpp"
#include "reins/csv.hpp"
#include "reins/evaluator.hpp"
#include "reins/hjb.hpp"
#include "reins/simulator.hpp"

namespace fs = std::filesystem;
using namespace reins;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct CommonOptions {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

struct StrategyOptions {
  std::string file;
  std::optional<double> constant_u;
};

RunConfig load(const CommonOptions& opts) {
  RunConfig cfg = load_config(opts.config_path);
  if (!opts.out.empty()) cfg.output = opts.out;
  if (opts.seed) cfg.mc.seed = *opts.seed;
  cfg.mc.threads = opts.threads;
  return cfg;
}

fs::path prepare_output(const RunConfig& cfg) {
  const fs::path dir(cfg.output);
  fs::create_directories(dir);
  std::ofstream(dir / "config.json") << normalized_config(cfg);
  return dir;
}

Strategy strategy_from(const StrategyOptions& opts, const Grid& grid) {
  if (opts.constant_u) return Strategy::constant(grid, *opts.constant_u);
  return read_strategy_csv(opts.file, grid);
}

BoundaryProvider boundary_for(const RunConfig& cfg) {
  return monte_carlo_boundary(cfg.model(), cfg.mc, cfg.solver.phi_lo, cfg.solver.phi_hi);
}

int cmd_solve(const CommonOptions& opts) {
  const RunConfig cfg = load(opts);
  const Model model = cfg.model();
  const Grid grid = cfg.make_grid();
  const auto dir = prepare_output(cfg);
  const PolicyIterationConfig pi = cfg.policy_iteration_config(opts.threads);

  PolicyIterationReport report;
  try {
    report = policy_iteration(Strategy::constant(grid, 1.0), model, boundary_for(cfg), pi);
  } catch (const PolicyIterationError& e) {
    if (!e.partial().iterates.empty()) write_report_csv((dir / "report.csv").string(), e.partial());
    throw;
  }
  const Iterate& last = report.final();
  write_value_csv((dir / "value.csv").string(), last.value);
  write_strategy_csv((dir / "strategy.csv").string(), last.strategy, cfg.params);
  write_residual_csv((dir / "residual.csv").string(), hjb_residual(last.value, model, pi.improvement));
  write_report_csv((dir / "report.csv").string(), report);

  std::cerr << "solve: " << report.iterates.size() << " iterations, " << to_string(report.stop_reason)
            << ", max residual " << last.max_residual << " (tol " << report.tol_residual << ")\n";
  return report.converged ? kExitOk : kExitNotConverged;
}

int cmd_evaluate(const CommonOptions& opts, const StrategyOptions& sopts) {
  const RunConfig cfg = load(opts);
  const Grid grid = cfg.make_grid();
  const Strategy strategy = strategy_from(sopts, grid);
  const auto dir = prepare_output(cfg);
  const GridFunction value = policy_evaluate(strategy, cfg.model(), boundary_for(cfg)(strategy), opts.threads);
  write_value_csv((dir / "value.csv").string(), value);
  return kExitOk;
}

int cmd_simulate(const CommonOptions& opts, const StrategyOptions& sopts, const std::vector<double>& x0s) {
  const RunConfig cfg = load(opts);
  const Grid grid = cfg.make_grid();
  const Strategy strategy = strategy_from(sopts, grid);
  const Model model = cfg.model();
  const auto dir = prepare_output(cfg);
  std::vector<McRow> rows;
  for (double x0 : x0s) rows.push_back({x0, mc_estimate(x0, strategy, model, cfg.mc)});
  write_mc_csv((dir / "mc.csv").string(), rows);
  return kExitOk;
}

int cmd_asymptotics(const CommonOptions& opts) {
  const RunConfig cfg = load(opts);
  const auto dir = prepare_output(cfg);
  std::vector<AsymptoticRow> rows;
  for (double delta : cfg.asymptotic_deltas) {
    ModelParams params = cfg.params;
    params.delta = delta;
    const auto best = maximize_adjustment_coefficient(params, cfg.claims);
    const double closed =
        cfg.claims.is_exponential() ? asymptotic_optimal_u(params, cfg.claims) : std::numeric_limits<double>::quiet_NaN();
    rows.push_back({delta, closed, best.u, best.coefficient.gamma});
  }
  write_asymptotics_csv((dir / "asy.csv").string(), rows);
  return kExitOk;
}

int cmd_config(const CommonOptions& opts) {
  std::cout << normalized_config(load(opts));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal dynamic reinsurance by policy iteration on the HJB equation"};
  app.require_subcommand(1);

  CommonOptions common;
  StrategyOptions sopts;
  std::vector<double> x0s;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory (overrides the config)");
    sub->add_option("--seed", common.seed, "Monte Carlo seed (overrides the config)");
    sub->add_option("--threads", common.threads, "worker threads, 0 = all cores");
  };
  auto add_strategy = [&](CLI::App* sub) {
    auto* group = sub->add_option_group("strategy");
    group->add_option("--strategy", sopts.file, "strategy CSV with columns x,u on the config grid")
        ->check(CLI::ExistingFile);
    group->add_option("--constant-u", sopts.constant_u, "constant control in [0, 1]")->check(CLI::Range(0.0, 1.0));
    group->require_option(1);
  };

  auto* solve = app.add_subcommand("solve", "policy iteration; writes value, strategy, residual and report CSVs");
  add_common(solve);
  auto* evaluate = app.add_subcommand("evaluate", "value of a fixed strategy; writes value.csv");
  add_common(evaluate);
  add_strategy(evaluate);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates of a fixed strategy; writes mc.csv");
  add_common(simulate);
  add_strategy(simulate);
  simulate->add_option("--x0", x0s, "initial reserves")->required()->check(CLI::PositiveNumber);
  auto* asymptotics = app.add_subcommand("asymptotics", "adjustment-coefficient maximizers; writes asy.csv");
  add_common(asymptotics);
  auto* config = app.add_subcommand("config", "print the normalized configuration");
  add_common(config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*solve) return cmd_solve(common);
    if (*evaluate) return cmd_evaluate(common, sopts);
    if (*simulate) return cmd_simulate(common, sopts, x0s);
    if (*asymptotics) return cmd_asymptotics(common);
    if (*config) return cmd_config(common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const NoAdjustmentCoefficient& e) {
    std::cerr << "NoAdjustmentCoefficient: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitError;
}
