#include "reins/simulator.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "reins/parallel.hpp"

namespace reins {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Position after time t under the affine drift with value c at x.
double flow_position(double x, double c, double slope, double t) {
  if (slope == 0.0) return x + c * t;
  return x + c * std::expm1(slope * t) / slope;
}

// Time to move a signed distance d under the affine drift with value c at
// the start; the drift must keep its sign along the way.
double travel_time(double d, double c, double slope) {
  if (slope == 0.0) return d / c;
  return std::log1p(slope * d / c) / slope;
}

constexpr std::size_t kChunk = 4096;

struct Moments {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    const std::int64_t total = n + o.n;
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / static_cast<double>(total);
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / static_cast<double>(total);
    n = total;
  }
};

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL))) {}

double RandomStream::uniform() {
  // 53 random bits mapped to the open interval (0, 1)
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

DriftFlow::DriftFlow(const Strategy& strategy, const ModelParams& params)
    : strategy_(strategy), grid_(strategy.grid()), h_(grid_.spacing()) {
  const Index n = grid_.size();
  const auto sz = static_cast<std::size_t>(n);
  c_.resize(sz);
  for (Index i = 0; i < n; ++i) c_[static_cast<std::size_t>(i)] = premium(params, strategy[i]);
  up_.assign(sz, 0.0);
  down_.assign(sz, 0.0);
  up_reach_.assign(sz, n - 1);
  down_reach_.assign(sz, 0);
  auto at = [](auto& v, Index i) -> auto& { return v[static_cast<std::size_t>(i)]; };
  for (Index k = 0; k + 1 < n; ++k) {
    const double c0 = at(c_, k);
    const double c1 = at(c_, k + 1);
    const bool up = c0 > 0.0 && c1 > 0.0;
    const bool down = c0 < 0.0 && c1 < 0.0;
    at(up_, k + 1) = at(up_, k) + (up ? travel_time(h_, c0, slope(k)) : 0.0);
    at(down_, k + 1) = at(down_, k) + (down ? travel_time(-h_, c1, slope(k)) : 0.0);
    at(down_reach_, k + 1) = down ? at(down_reach_, k) : k + 1;
  }
  for (Index k = n - 2; k >= 0; --k) {
    at(up_reach_, k) = at(c_, k) > 0.0 && at(c_, k + 1) > 0.0 ? at(up_reach_, k + 1) : k;
  }
}

double DriftFlow::drift(double x) const {
  if (x <= grid_.lo()) return c_.front();
  if (x >= grid_.hi()) return c_.back();
  const Index k = grid_.cell(x);
  return c_[static_cast<std::size_t>(k)] + slope(k) * (x - grid_.node(k));
}

DriftFlow::Step DriftFlow::advance(double x, double dt) const {
  const double lo = grid_.lo();
  const double hi = grid_.hi();
  const Index last = grid_.last();
  double elapsed = 0.0;
  auto finish = [&](double x_new, double t) -> Step {
    if (!std::isfinite(x_new)) throw SimulationError("reserve became non-finite while following the drift");
    return {x_new, elapsed + t, false};
  };
  auto at = [](const auto& v, Index i) { return v[static_cast<std::size_t>(i)]; };
  for (;;) {
    if (dt <= 0.0) return {x, elapsed, false};
    if (x >= hi || x <= lo) {
      // constant drift outside the grid
      const double c = x >= hi ? c_.back() : c_.front();
      if (c == 0.0) return {x, elapsed + dt, false};
      if (x <= lo && c < 0.0) {
        const double t = x / -c;
        if (t <= dt) return {0.0, elapsed + t, true};
        return finish(x + c * dt, dt);
      }
      if (x >= hi && c > 0.0) return finish(x + c * dt, dt);
      // heading back into the grid
      const double target = x >= hi ? hi : lo;
      const double t = (target - x) / c;
      if (t >= dt) return finish(x + c * dt, dt);
      elapsed += t;
      dt -= t;
      x = target;
    }
    Index k = grid_.cell(x);
    double c = at(c_, k) + slope(k) * (x - grid_.node(k));
    if (c == 0.0) return {x, elapsed + dt, false};
    if (c > 0.0) {
      if (grid_.node(k + 1) <= x) {
        if (++k == last) {
          x = hi;
          continue;
        }
        c = at(c_, k);
      }
      const double s = slope(k);
      if (!(at(c_, k + 1) > 0.0)) return finish(flow_position(x, c, s, dt), dt);
      const double t = travel_time(grid_.node(k + 1) - x, c, s);
      if (t >= dt) return finish(flow_position(x, c, s, dt), dt);
      elapsed += t;
      dt -= t;
      const Index j = k + 1;
      const Index reach = at(up_reach_, j);
      const auto first = up_.begin() + j;
      const Index m = j + (std::upper_bound(first, up_.begin() + reach + 1, at(up_, j) + dt) - first) - 1;
      const double spent = at(up_, m) - at(up_, j);
      elapsed += spent;
      dt -= spent;
      if (m < reach) return finish(flow_position(grid_.node(m), at(c_, m), slope(m), dt), dt);
      x = grid_.node(m);
    } else {
      if (grid_.node(k) >= x) --k;
      const double s = slope(k);
      if (!(at(c_, k) < 0.0)) return finish(flow_position(x, c, s, dt), dt);
      const double t = travel_time(grid_.node(k) - x, c, s);
      if (t >= dt) return finish(flow_position(x, c, s, dt), dt);
      elapsed += t;
      dt -= t;
      const Index j = k;
      const Index reach = at(down_reach_, j);
      const auto first = down_.begin() + reach;
      const Index m = reach + (std::lower_bound(first, down_.begin() + j + 1, at(down_, j) - dt) - first);
      const double spent = at(down_, j) - at(down_, m);
      elapsed += spent;
      dt -= spent;
      if (m > reach) return finish(flow_position(grid_.node(m), at(c_, m), slope(m - 1), dt), dt);
      x = grid_.node(m);
      if (x <= 0.0) return {0.0, elapsed, true};
    }
  }
}

PathOutcome simulate_path(double x0, const Strategy& strategy, const Model& model, double horizon,
                          RandomStream& rng) {
  return simulate_path(x0, DriftFlow(strategy, model.params), model, horizon, rng);
}

PathOutcome simulate_path(double x0, const DriftFlow& flow, const Model& model, double horizon, RandomStream& rng) {
  if (!(x0 > 0.0) || !std::isfinite(x0)) throw SimulationError("initial reserve must be positive and finite");
  if (!(horizon > 0.0)) throw SimulationError("horizon must be positive");
  const auto& p = model.params;
  const Strategy& strategy = flow.strategy();
  double t = 0.0;
  double x = x0;
  for (;;) {
    const double wait = rng.exponential(p.lambda);
    const double remaining = horizon - t;
    const auto step = flow.advance(x, std::min(wait, remaining));
    if (step.hit_zero) {
      const double tau = t + step.elapsed;
      return {SmoothRuin{tau}, std::exp(-p.delta * tau) * model.penalty(0.0, 0.0)};
    }
    if (wait >= remaining) return {Survived{horizon}, 0.0};
    t += wait;
    x = step.x;
    const double claim = model.claims.sample_from_uniform(rng.uniform());
    const double retained = retention(model.retention, claim, strategy(x));
    if (!std::isfinite(x) || !std::isfinite(retained)) {
      std::ostringstream os;
      os << "non-finite state at t=" << t << ": reserve " << x << ", retained claim " << retained;
      throw SimulationError(os.str());
    }
    if (retained >= x) {
      const double deficit = retained - x;
      return {ClaimRuin{t, x, deficit}, std::exp(-p.delta * t) * model.penalty(x, deficit)};
    }
    x -= retained;
  }
}

double horizon_for_tolerance(double delta, double bound, double abs_tol) {
  if (!(delta > 0.0)) throw DomainError("an automatic horizon needs a positive discount rate");
  if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be positive");
  return std::max(std::log(2.0 * std::max(bound, abs_tol) / abs_tol) / delta, 1.0);
}

McEstimate mc_estimate(double x0, const Strategy& strategy, const Model& model, const McConfig& config) {
  if (config.n_paths < 2) throw SimulationError("mc_estimate needs at least 2 paths");
  const double bound = model.penalty.bound();
  const double horizon = config.horizon ? *config.horizon
                                        : horizon_for_tolerance(model.params.delta, bound, config.abs_tol);
  const auto n = static_cast<std::size_t>(config.n_paths);
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<Moments> chunks(n_chunks);
  const DriftFlow flow(strategy, model.params);
  parallel_for(n_chunks, config.threads, [&](std::size_t c) {
    Moments m;
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      RandomStream rng(config.seed, i);
      m.add(simulate_path(x0, flow, model, horizon, rng).discounted_penalty);
    }
    chunks[c] = m;
  });
  // pairwise merge in a fixed order keeps the result independent of threads
  for (std::size_t width = 1; width < n_chunks; width *= 2) {
    for (std::size_t i = 0; i + width < n_chunks; i += 2 * width) chunks[i].merge(chunks[i + width]);
  }
  const Moments& total = chunks.front();
  McEstimate est;
  est.mean = total.mean;
  est.n_paths = total.n;
  est.std_error = std::sqrt(total.m2 / static_cast<double>(total.n - 1) / static_cast<double>(total.n));
  est.horizon = horizon;
  est.truncation_bound = std::exp(-model.params.delta * horizon) * bound;
  return est;
}

}  // namespace reins
