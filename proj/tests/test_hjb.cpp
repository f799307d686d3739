#include <cmath>
#include <random>

#include "doctest.h"
#include "reins/boundary.hpp"
#include "reins/hjb.hpp"
#include "reins/simulator.hpp"

using namespace reins;

namespace {

Model exp_model(double delta, PenaltyFunction w = PenaltyFunction::w1()) {
  Model m;
  m.params.delta = delta;
  m.claims = ClaimDistribution::exponential(1.0);
  m.penalty = std::move(w);
  return m;
}

BoundaryProvider fixed(double upper) {
  return [upper](const Strategy&) { return BoundaryData{std::nullopt, upper}; };
}

// One inter-claim period of the controlled process followed by the value
// `v` afterwards: a Monte Carlo estimate of the dynamic-programming operator.
McEstimate one_step_operator(double x0, const Strategy& s, const GridFunction& v, const Model& m, int n) {
  const DriftFlow flow(s, m.params);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    RandomStream rng(31, static_cast<std::uint64_t>(i));
    const double wait = rng.exponential(m.params.lambda);
    const auto step = flow.advance(x0, wait);
    double value = 0.0;
    if (step.hit_zero) {
      value = std::exp(-m.params.delta * step.elapsed) * m.penalty(0.0, 0.0);
    } else {
      const double y = m.claims.sample_from_uniform(rng.uniform());
      const double retained = retention(m.retention, y, s(step.x));
      const double discount = std::exp(-m.params.delta * wait);
      value = retained >= step.x ? discount * m.penalty(step.x, retained - step.x)
                                 : discount * v(step.x - retained);
    }
    sum += value;
    sum_sq += value * value;
  }
  McEstimate e;
  e.mean = sum / n;
  e.std_error = std::sqrt((sum_sq / n - e.mean * e.mean) / (n - 1));
  e.n_paths = n;
  return e;
}

}  // namespace

TEST_SUITE("hjb") {
  TEST_CASE("the zero function makes full reinsurance optimal, ties go to the larger control") {
    // With phi = 0 the score of u is lambda * P(u Y > x) = exp(-x/u). Below
    // x = 0.01 * 745 that is positive for u = 0.01, so only u = 0 attains the
    // minimum 0. Further out exp(-x/0.01) underflows to exactly 0 and the
    // candidates 0 and 0.01 tie.
    const Model m = exp_model(0.05);
    const Grid g(0.0, 14.0, 141);
    ImprovementOptions opts;
    opts.refine_tol = 0.0;
    const auto s = policy_improve(GridFunction::constant(g, 0.0), m, opts);
    for (Index i = 1; i < g.size(); ++i) {
      const double x = g.node(i);
      if (x < 7.0) CHECK(s[i] == 0.0);
      if (x > 7.5) CHECK(s[i] == 0.01);
    }
  }

  TEST_CASE("a single-point control set returns u = 1") {
    const Model m = exp_model(0.05);
    const Grid g(0.0, 14.0, 141);
    ImprovementOptions opts;
    opts.control_grid_size = 1;
    const auto s = policy_improve(GridFunction::constant(g, 0.3), m, opts);
    CHECK(s == Strategy::constant(g, 1.0));
  }

  TEST_CASE("residual of the penalty bound is -delta") {
    const Model m = exp_model(0.05);
    const Grid g(0.0, 14.0, 141);
    const auto r = hjb_residual(GridFunction::constant(g, 1.0), m, {});
    CHECK(r[0] == 0.0);
    CHECK(r[g.last()] == 0.0);
    for (Index i = 1; i < g.last(); ++i) CHECK(r[i] == doctest::Approx(-0.05).epsilon(1e-9));
  }

  TEST_CASE("the uncontrolled value is improvable") {
    const Model m = exp_model(0.05);
    const Grid g(0.0, 14.0, 281);
    const double r = 0.3862907;
    const auto phi = policy_evaluate(Strategy::constant(g, 1.0), m, {std::nullopt, (1 - r) * std::exp(-14 * r)});
    const auto res = hjb_residual(phi, m, {});
    CHECK(res.values().minCoeff() < -1e-4);
    CHECK(res.values().maxCoeff() <= 1e-12);
  }

  TEST_CASE("restricting the controls to {1} converges in one improvement step") {
    const Model m = exp_model(0.05);
    const Grid g(0.0, 14.0, 141);
    PolicyIterationConfig cfg;
    cfg.improvement.control_grid_size = 1;
    const auto report = policy_iteration(Strategy::constant(g, 1.0), m, fixed(0.003), cfg);
    CHECK(report.converged);
    CHECK(report.iterates.size() == 1);
    const auto direct = policy_evaluate(Strategy::constant(g, 1.0), m, {std::nullopt, 0.003});
    CHECK(report.final().value.values() == direct.values());
  }

  TEST_CASE("policy iteration: monotone iterates, bounded decreasing value, small residual") {
    for (const auto& w : {PenaltyFunction::w1(), PenaltyFunction::w2()}) {
      const Model m = exp_model(0.1, w);
      const Grid g(0.0, 14.0, 141);
      PolicyIterationConfig cfg;
      // the true value at x = 14 is far below the bound; 0 keeps the data consistent
      const auto report = policy_iteration(Strategy::constant(g, 1.0), m, fixed(0.0), cfg);
      REQUIRE(report.converged);
      for (std::size_t k = 1; k < report.iterates.size(); ++k) {
        const auto diff = report.iterates[k].value.values() - report.iterates[k - 1].value.values();
        CHECK(diff.maxCoeff() <= 1e-6 * std::max(1.0, report.iterates[0].value.values().maxCoeff()));
        CHECK(report.iterates[k].sup_change >= 0.0);
      }
      const auto& v = report.final().value.values();
      CHECK(v.minCoeff() >= 0.0);
      CHECK(v.maxCoeff() <= w.bound());
      for (Index i = 0; i + 1 < g.size(); ++i) CHECK(v[i] > v[i + 1] - 1e-9);
      const auto res = hjb_residual(report.final().value, m, cfg.improvement);
      CHECK(res.values().cwiseAbs().maxCoeff() < report.tol_residual);
    }
  }

  TEST_CASE("stop reasons") {
    const Model m = exp_model(0.05);
    const Grid g(0.0, 14.0, 141);
    PolicyIterationConfig cfg;
    cfg.max_iters = 1;
    const auto report = policy_iteration(Strategy::constant(g, 1.0), m, fixed(0.003), cfg);
    CHECK_FALSE(report.converged);
    CHECK(report.stop_reason == StopReason::MaxIters);
    CHECK(to_string(StopReason::MaxIters) == "max-iters");
    CHECK(to_string(StopReason::ToleranceMet) == "tolerance-met");
    CHECK(to_string(StopReason::Stagnation) == "stagnation");
    cfg.max_iters = 0;
    CHECK_THROWS_AS(policy_iteration(Strategy::constant(g, 1.0), m, fixed(0.003), cfg), DomainError);
  }

  TEST_CASE("evaluation failures carry the partial report") {
    const Model m = exp_model(0.05);
    const Grid g(0.0, 14.0, 141);
    int calls = 0;
    BoundaryProvider flaky = [&](const Strategy&) {
      return BoundaryData{std::nullopt, ++calls == 1 ? 0.003 : 7.0};
    };
    PolicyIterationConfig cfg;
    cfg.monotone_boundary = false;
    try {
      policy_iteration(Strategy::constant(g, 1.0), m, flaky, cfg);
      FAIL("expected a failure");
    } catch (const PolicyIterationError& e) {
      CHECK(e.partial().iterates.size() == 1);
    }
  }

  TEST_CASE("the converged pair satisfies the one-step dynamic-programming identity") {
    const Model m = exp_model(0.05);
    const Grid g(0.0, 14.0, 281);
    McConfig mc;
    mc.n_paths = 100000;
    PolicyIterationConfig cfg;
    const auto report = policy_iteration(Strategy::constant(g, 1.0), m, monte_carlo_boundary(m, mc), cfg);
    REQUIRE(report.converged);
    const auto& v = report.final().value;
    const auto& s = report.final().strategy;
    for (double x : {0.5, 3.0, 7.0}) {
      const auto est = one_step_operator(x, s, v, m, 400000);
      // MC noise plus the first-order discretization error of a coarse grid
      CHECK(std::abs(est.mean - v(x)) < 4 * est.std_error + 5e-3);
    }
  }
}
