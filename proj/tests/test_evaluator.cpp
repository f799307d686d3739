#include <cmath>
#include <random>

#include "doctest.h"
#include "reins/evaluator.hpp"
#include "reins/quadrature.hpp"

using namespace reins;

namespace {

Model exp_w1(double delta) {
  Model m;
  m.params.delta = delta;
  m.claims = ClaimDistribution::exponential(1.0);
  m.penalty = PenaltyFunction::w1();
  return m;
}

// Independent oracle: the positive root of c R^2 - (c - lambda - delta) R - delta
// located by a plain sign scan and bisection, without the quadratic formula.
double scan_root(double c, double lambda, double delta) {
  auto f = [&](double r) { return c * r * r - (c - lambda - delta) * r - delta; };
  const double step = 1e-4;
  double hi = 1e-6;  // skips the trivial root R = 0 when delta = 0
  while (f(hi) < 0.0) hi += step;
  double lo = hi - step;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double max_error_vs_closed_form(Index n, double delta) {
  const Model m = exp_w1(delta);
  const Grid g(0.0, 14.0, n);
  const double r = scan_root(1.5, 1.0, delta);
  auto phi = [&](double x) { return (1 - r) * std::exp(-r * x); };
  const auto v = policy_evaluate(Strategy::constant(g, 1.0), m, {std::nullopt, phi(14.0)});
  double err = 0.0;
  for (Index i = 0; i < n; ++i) err = std::max(err, std::abs(v[i] - phi(g.node(i))));
  return err;
}

}  // namespace

TEST_SUITE("evaluator") {
  TEST_CASE("independent root scan reproduces the quoted roots") {
    CHECK(scan_root(1.5, 1.0, 0.05) == doctest::Approx(0.3862907).epsilon(1e-6));
    CHECK(scan_root(1.5, 1.0, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  }

  TEST_CASE("hamiltonian examples") {
    const Model m = exp_w1(0.05);
    const Grid g(0.0, 14.0, 1401);
    const auto zero = GridFunction::constant(g, 0.0);
    CHECK(hamiltonian(zero, 0.0, 2.0, 1.0, m) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    const auto k = GridFunction::constant(g, 0.37);
    CHECK(hamiltonian(k, 0.0, 5.0, 0.0, m) == doctest::Approx(-0.05 * 0.37).epsilon(1e-12));
  }

  TEST_CASE("the closed form satisfies the equation identically") {
    const Model m = exp_w1(0.05);
    const Grid fine(0.0, 14.0, 14001);
    const double r = scan_root(1.5, 1.0, 0.05);
    Eigen::VectorXd v(fine.size());
    for (Index i = 0; i < fine.size(); ++i) v[i] = (1 - r) * std::exp(-r * fine.node(i));
    const GridFunction f(fine, v);
    for (double x : {0.5, 2.0, 7.0}) {
      CHECK(std::abs(hamiltonian(f, -r * f(x), x, 1.0, m)) < 1e-6);
    }
  }

  TEST_CASE("full reinsurance is pure transport to the origin") {
    const Model m = exp_w1(0.05);
    const Grid g(0.0, 14.0, 1401);
    const auto v = policy_evaluate(Strategy::constant(g, 0.0), m, {std::nullopt, std::exp(-0.05 * 14.0 / 0.2)});
    double err = 0.0;
    for (Index i = 0; i < g.size(); ++i) err = std::max(err, std::abs(v[i] - std::exp(-0.05 * g.node(i) / 0.2)));
    CHECK(v[0] == 1.0);
    CHECK(err < 2e-3);
  }

  TEST_CASE("uncontrolled process against the closed form with and without discounting") {
    CHECK(max_error_vs_closed_form(1401, 0.05) <= 1e-3);
    CHECK(max_error_vs_closed_form(1401, 0.0) <= 1e-3);
  }

  TEST_CASE("halving the spacing at least halves the error") {
    const double coarse = max_error_vs_closed_form(351, 0.05);
    const double medium = max_error_vs_closed_form(701, 0.05);
    const double fine = max_error_vs_closed_form(1401, 0.05);
    CHECK(medium <= 0.5 * coarse * 1.02);
    CHECK(fine <= 0.5 * medium * 1.02);
  }

  TEST_CASE("discrete maximum principle for random strategies and boundary data") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Grid g(0.0, 14.0, 281);
    for (const auto& claims : {ClaimDistribution::exponential(1.0), ClaimDistribution::pareto(3.0)}) {
      for (const auto& w : {PenaltyFunction::w1(), PenaltyFunction::w2()}) {
        Model m;
        m.params.delta = 0.1;
        m.claims = claims;
        m.penalty = w;
        for (int trial = 0; trial < 5; ++trial) {
          Eigen::VectorXd u(g.size());
          for (Index i = 0; i < g.size(); ++i) u[i] = unit(gen);
          const auto v = policy_evaluate(Strategy(g, u), m, {w.bound() * unit(gen), w.bound() * unit(gen)});
          CHECK(v.values().minCoeff() >= -1e-12 * w.bound());
          CHECK(v.values().maxCoeff() <= w.bound() * (1 + 1e-12));
        }
      }
    }
  }

  TEST_CASE("evaluation residual vanishes at the fixed strategy") {
    Model m = exp_w1(0.05);
    m.penalty = PenaltyFunction::w2();
    const Grid g(0.0, 14.0, 281);
    Eigen::VectorXd u(g.size());
    for (Index i = 0; i < g.size(); ++i) u[i] = 0.05 + 0.9 * std::abs(std::sin(g.node(i)));
    const Strategy s(g, u);
    const auto v = policy_evaluate(s, m, {std::nullopt, 1e-3});
    double worst = 0.0;
    for (Index i = 0; i < g.size(); ++i) {
      const double c = premium(m.params, s[i]);
      if (is_dirichlet_node(g, i, c)) continue;
      worst = std::max(worst, std::abs(discrete_hamiltonian(v, i, s[i], m)));
    }
    CHECK(worst < 1e-9);
  }

  TEST_CASE("zero-drift nodes use the algebraic relation") {
    const Model m = exp_w1(0.05);
    const Grid g(0.0, 14.0, 141);
    const double u0 = premium_zero(m.params);
    const auto v = policy_evaluate(Strategy::constant(g, u0), m, {std::nullopt, 0.2});
    const Index i = 40;
    const double x = g.node(i);
    const double rhs = m.params.lambda *
                       (survival_integral(v, x, u0, m.claims, m.retention) +
                        ruin_integral(m.penalty, x, u0, m.claims, m.retention)) /
                       (m.params.delta + m.params.lambda);
    CHECK(v[i] == doctest::Approx(rhs).epsilon(1e-10));
  }

  TEST_CASE("boundary handling") {
    const Model m = exp_w1(0.05);
    const Grid g(0.0, 14.0, 141);
    const auto s = Strategy::constant(g, 0.0);
    CHECK(policy_evaluate(s, m, {0.3, 0.01})[0] == 0.3);
    CHECK(policy_evaluate(s, m, {std::nullopt, 0.01})[0] == 1.0);
    CHECK_THROWS_AS(policy_evaluate(s, m, {std::nullopt, 1.5}), EvaluationError);
    CHECK_THROWS_AS(policy_evaluate(s, m, {-0.1, 0.5}), EvaluationError);
    const Grid shifted(1.0, 14.0, 131);
    CHECK_THROWS_AS(policy_evaluate(Strategy::constant(shifted, 0.0), m, {std::nullopt, 0.01}), EvaluationError);
    // positive drift at the origin imposes no lower value
    const auto v = policy_evaluate(Strategy::constant(g, 1.0), m, {0.123, 0.003});
    CHECK(v[0] != 0.123);
    try {
      policy_evaluate(s, m, {std::nullopt, 2.0});
    } catch (const EvaluationError& e) {
      CHECK(e.nodes() == std::vector<Index>{g.last()});
    }
  }
}
