// Acceptance checks, one per criterion number. Each run prints a single
// "PASS criterion N: ..." or "FAIL criterion N: ..." line and exits 0 on pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "reins/asymptotics.hpp"
#include "reins/boundary.hpp"
#include "reins/config.hpp"
#include "reins/evaluator.hpp"
#include "reins/hjb.hpp"
#include "reins/quadrature.hpp"
#include "reins/simulator.hpp"

using namespace reins;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

ModelParams base_params(double delta, double beta = 1.0) {
  ModelParams p;
  p.lambda = 1.0;
  p.beta = beta;
  p.eta = 0.5;
  p.theta = 0.7;
  p.delta = delta;
  return p;
}

Model exp_w1(double delta) {
  Model m;
  m.params = base_params(delta);
  m.claims = ClaimDistribution::exponential(1.0);
  m.penalty = PenaltyFunction::w1();
  return m;
}

// Positive root of c R^2 - (c - lambda - delta) R - delta by sign scan and bisection.
double scan_root(double c, double lambda, double delta) {
  auto f = [&](double r) { return c * r * r - (c - lambda - delta) * r - delta; };
  double hi = 1e-6;
  while (f(hi) < 0.0) hi += 1e-4;
  double lo = hi - 1e-4;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

RunConfig load_data(const std::string& name) { return load_config(std::string(REINS_TEST_DATA) + "/" + name); }

PolicyIterationReport solve(const RunConfig& cfg) {
  return policy_iteration(Strategy::constant(cfg.make_grid(), 1.0), cfg.model(),
                          monte_carlo_boundary(cfg.model(), cfg.mc, cfg.solver.phi_lo, cfg.solver.phi_hi),
                          cfg.policy_iteration_config(0));
}

void criterion_1(Outcome& out) {
  const auto d = ClaimDistribution::exponential(1.0);
  const double u05 = asymptotic_optimal_u(base_params(0.05), d);
  const double u10 = asymptotic_optimal_u(base_params(0.1), d);
  out.require(std::abs(u05 - 0.3275) <= 1e-4, "u*(0.05)");
  out.require(std::abs(u10 - 0.2423) <= 1e-4, "u*(0.1)");
  for (double beta : {0.5, 1.0, 5.0}) {
    for (double delta : {0.05, 0.1}) {
      const double u = asymptotic_optimal_u(base_params(delta, beta), ClaimDistribution::exponential(1.0 / beta));
      out.require(std::abs(u - asymptotic_optimal_u(base_params(delta), d)) < 1e-12, "beta independence");
    }
  }
  out.detail << "u*(0.05)=" << u05 << " u*(0.1)=" << u10;
}

void criterion_2(Outcome& out) {
  const double u0 = premium_zero(base_params(0.05));
  out.require(std::abs(u0 - 0.117647) <= 1e-6, "premium zero");
  out.require(std::abs(premium(base_params(0.05), u0)) < 1e-12, "premium vanishes");
  out.detail << "u0=" << u0;
}

void criterion_3(Outcome& out) {
  for (double delta : {0.0, 0.05}) {
    const Model m = exp_w1(delta);
    const Grid g(0.0, 14.0, 1400);
    const double r = scan_root(1.5, 1.0, delta);
    auto phi = [&](double x) { return (1 - r) * std::exp(-r * x); };
    const auto v = policy_evaluate(Strategy::constant(g, 1.0), m, {std::nullopt, phi(14.0)});
    double err = 0.0;
    for (Index i = 0; i < g.size(); ++i) err = std::max(err, std::abs(v[i] - phi(g.node(i))));
    out.require(err <= 1e-3, "max error at delta=" + std::to_string(delta));
    out.detail << "delta=" << delta << " R=" << r << " max_err=" << err << " ";
  }
}

void criterion_4(Outcome& out) {
  const Model m = exp_w1(0.05);
  const Grid g(0.0, 14.0, 1401);
  McConfig mc;
  mc.n_paths = 1'000'000;
  double worst = 0.0;
  for (double u : {0.3, 0.6, 1.0}) {
    const auto s = Strategy::constant(g, u);
    const auto v = policy_evaluate(s, m, monte_carlo_boundary(m, mc)(s));
    for (double x : {2.0, 5.0, 8.0, 11.0, 13.0}) {
      mc.seed = 1000 + static_cast<std::uint64_t>(x * 10 + u * 100);
      const auto est = mc_estimate(x, s, m, mc);
      const double ratio = std::abs(v(x) - est.mean) / est.std_error;
      worst = std::max(worst, ratio);
      out.require(ratio <= 3.0, "u=" + std::to_string(u) + " x=" + std::to_string(x));
    }
  }
  out.detail << "worst |PIDE-MC|/SE=" << worst;
}

void criterion_5(Outcome& out) {
  const auto cfg = load_data("exp_w1_d005.json");
  const auto report = solve(cfg);
  out.require(report.converged, "converged");
  const auto& it = report.iterates;
  double worst_rise = -INFINITY;
  for (std::size_t k = 1; k < it.size(); ++k) {
    worst_rise = std::max(worst_rise, (it[k].value.values() - it[k - 1].value.values()).maxCoeff());
  }
  out.require(worst_rise <= 1e-6, "nonincreasing iterates");
  // sup_change of iterate k (0-based) is the gap between iterates k and k+1 (1-based)
  const double gap12 = it.size() > 1 ? it[1].sup_change : 0.0;
  const double gap45 = it.size() > 4 ? it[4].sup_change : 0.0;
  out.require(it.size() > 1, "at least two iterates");
  out.require(gap45 <= 0.05 * gap12, "gap(4,5) <= 5% gap(1,2)");
  const double u_end = report.final().strategy[cfg.make_grid().last()];
  out.require(std::abs(u_end - 0.3275) <= 0.05, "u(14) near u*");
  out.detail << "iterates=" << it.size() << " max_rise=" << worst_rise << " gap12=" << gap12 << " gap45=" << gap45
             << " u(14)=" << u_end;
}

void criterion_6(Outcome& out) {
  const auto cfg = load_data("pareto3_w2_d01.json");
  const auto report = solve(cfg);
  out.require(report.converged, "converged");
  const auto& s = report.final().strategy;
  double max_c = -INFINITY;
  for (Index i = 0; i < s.grid().size(); ++i) max_c = std::max(max_c, premium(cfg.params, s[i]));
  out.require(max_c < 0.0, "negative premium everywhere");
  bool threw = false;
  try {
    adjustment_coefficient(0.5, cfg.params, cfg.claims);
  } catch (const NoAdjustmentCoefficient&) {
    threw = true;
  }
  out.require(threw, "NoAdjustmentCoefficient for Pareto");
  out.detail << "max premium=" << max_c;
}

void criterion_7(Outcome& out) {
  const auto cfg = load_data("exp_w2_d01.json");
  const auto report = solve(cfg);
  out.require(report.converged, "converged");
  const double c0 = premium(cfg.params, report.final().strategy[0]);
  const double v0 = report.final().value[0];
  out.require(c0 < 0.0, "negative premium at 0");
  out.require(std::abs(v0 - 0.5) <= 2e-2, "V(0) = w2(0,0)");
  out.detail << "c(u(0))=" << c0 << " V(0)=" << v0;
}

void criterion_8(Outcome& out) {
  auto cfg = load_data("exp_w1_d005.json");
  cfg.mc.n_paths = 200'000;
  const Model m = cfg.model();
  const auto report = solve(cfg);
  out.require(report.converged, "converged");
  const auto& v = report.final().value;
  const Grid& g = v.grid();

  bool decreasing = true;
  for (Index i = 0; i + 1 < g.size(); ++i) decreasing = decreasing && v[i] > v[i + 1];
  out.require(decreasing, "strictly decreasing");
  out.require(v.values().minCoeff() >= 0.0 && v.values().maxCoeff() <= m.penalty.bound(), "0 <= V <= M");
  const double residual = hjb_residual(v, m, cfg.policy_iteration_config(0).improvement).values().cwiseAbs().maxCoeff();
  out.require(residual < report.tol_residual, "residual below tolerance");

  // V <= Phi^u, up to the Monte Carlo noise of the two upper boundary values
  McConfig mc = cfg.mc;
  const double v_hi_se = mc_estimate(g.hi(), report.final().strategy, m, mc).std_error;
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> unit(premium_zero(m.params), 1.0);
  double worst_excess = -INFINITY;
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = Strategy::constant(g, unit(gen));
    const auto upper = mc_estimate(g.hi(), s, m, mc);
    const auto phi = policy_evaluate(s, m, {std::nullopt, upper.mean});
    const double slack = 3.0 * std::hypot(v_hi_se, upper.std_error);
    const double excess = (v.values() - phi.values()).maxCoeff();
    worst_excess = std::max(worst_excess, excess);
    out.require(excess <= slack, "V <= Phi^u for u=" + std::to_string(s[0]));
  }

  const auto one = GridFunction::constant(g, 1.0);
  const auto w1 = PenaltyFunction::w1();
  double worst_mass = 0.0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 1; j <= 20; ++j) {
      const double x = 14.0 * (i + 0.5) / 20.0;
      const double u = j / 20.0;
      const double total = survival_integral(one, x, u, m.claims, m.retention) + ruin_integral(w1, x, u, m.claims, m.retention);
      worst_mass = std::max(worst_mass, std::abs(total - 1.0));
    }
  }
  out.require(worst_mass < 1e-8, "conservation lattice");

  McConfig small;
  small.n_paths = 20'000;
  small.seed = 42;
  const auto s = Strategy::constant(g, 0.5);
  small.threads = 1;
  const auto a = mc_estimate(3.0, s, m, small);
  small.threads = 4;
  const auto b = mc_estimate(3.0, s, m, small);
  small.seed = 43;
  const auto c = mc_estimate(3.0, s, m, small);
  out.require(a == b, "same seed, same estimate across thread counts");
  out.require(a.mean != c.mean, "different seed, different estimate");

  out.detail << "residual=" << residual << " worst V-Phi^u=" << worst_excess << " mass_err=" << worst_mass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int criterion = 0;
  app.add_option("--criterion", criterion, "criterion number")->required()->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::function<void(Outcome&)>> checks = {
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4},
      {5, criterion_5}, {6, criterion_6}, {7, criterion_7}, {8, criterion_8}};

  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    checks.at(criterion)(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << "[exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s criterion %d: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", criterion, out.detail.str().c_str(), secs);
  return out.pass ? 0 : 1;
}
