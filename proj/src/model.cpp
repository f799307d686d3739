#include "reins/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace reins {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

// Antiderivative pieces for the Pareto law in t = 1 + y, density a t^(-a-1):
// integral of t^j over [t1, t2] (t2 may be inf).
double pareto_t_moment(double a, int j, double t1, double t2) {
  if (t2 <= t1) return 0.0;
  const double p = j - a;
  if (std::isinf(t2)) {
    if (p >= 0.0) return kInfinity;
    return a * std::pow(t1, p) / (-p);
  }
  if (p == 0.0) return a * std::log(t2 / t1);
  return a / p * (std::pow(t2, p) - std::pow(t1, p));
}

// Upper tail moments of Exponential(r): integral over [y, inf) of s^k r e^{-rs}.
double exp_tail_moment(double r, int k, double y) {
  if (std::isinf(y)) return 0.0;
  const double e = std::exp(-r * y);
  switch (k) {
    case 0:
      return e;
    case 1:
      return e * (y + 1.0 / r);
    default:
      return e * (y * y + 2.0 * y / r + 2.0 / (r * r));
  }
}

}  // namespace

void ModelParams::validate() const {
  require(std::isfinite(lambda) && lambda > 0.0, "lambda must be positive");
  require(std::isfinite(beta) && beta > 0.0, "beta must be positive");
  require(std::isfinite(eta) && eta > 0.0, "eta must be positive");
  require(std::isfinite(theta) && theta > eta, "theta must exceed eta");
  require(std::isfinite(delta) && delta >= 0.0, "delta must be nonnegative");
}

double premium_zero(const ModelParams& params) {
  return (params.theta - params.eta) / (1.0 + params.theta);
}

ClaimDistribution::ClaimDistribution(Law law) : law_(law) {
  std::visit(Overloaded{
                 [](const Exponential& e) {
                   require(std::isfinite(e.rate) && e.rate > 0.0, "exponential rate must be positive");
                 },
                 [](const Pareto& p) {
                   require(std::isfinite(p.shape) && p.shape > 1.0, "pareto shape must exceed 1");
                 },
             },
             law_);
}

std::string ClaimDistribution::name() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Exponential& e) { os << "exponential(rate=" << e.rate << ")"; },
                 [&](const Pareto& p) { os << "pareto(shape=" << p.shape << ")"; },
             },
             law_);
  return os.str();
}

double ClaimDistribution::cdf(double y) const {
  if (y <= 0.0) return 0.0;
  return std::visit(Overloaded{
                        [&](const Exponential& e) { return -std::expm1(-e.rate * y); },
                        [&](const Pareto& p) { return -std::expm1(-p.shape * std::log1p(y)); },
                    },
                    law_);
}

double ClaimDistribution::tail(double y) const {
  if (y <= 0.0) return 1.0;
  if (std::isinf(y)) return 0.0;
  return std::visit(Overloaded{
                        [&](const Exponential& e) { return std::exp(-e.rate * y); },
                        [&](const Pareto& p) { return std::exp(-p.shape * std::log1p(y)); },
                    },
                    law_);
}

double ClaimDistribution::density(double y) const {
  if (y < 0.0) return 0.0;
  return std::visit(Overloaded{
                        [&](const Exponential& e) { return e.rate * std::exp(-e.rate * y); },
                        [&](const Pareto& p) { return p.shape * std::pow(1.0 + y, -p.shape - 1.0); },
                    },
                    law_);
}

double ClaimDistribution::quantile(double p) const {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return kInfinity;
  return std::visit(Overloaded{
                        [&](const Exponential& e) { return -std::log1p(-p) / e.rate; },
                        [&](const Pareto& par) { return std::expm1(-std::log1p(-p) / par.shape); },
                    },
                    law_);
}

ClaimDistribution::TailMoments ClaimDistribution::tail_moments(double y) const {
  if (std::isinf(y)) return {0.0, 0.0};
  y = std::max(y, 0.0);
  return std::visit(Overloaded{
                        [&](const Exponential& e) {
                          const double m = std::exp(-e.rate * y);
                          return TailMoments{m, m * (y + 1.0 / e.rate)};
                        },
                        [&](const Pareto& p) {
                          // t^(-a) and a/(a-1) t^(1-a) - t^(-a), t = 1 + y
                          const double t = 1.0 + y;
                          const double m = std::exp(-p.shape * std::log(t));
                          return TailMoments{m, m * (p.shape * t / (p.shape - 1.0) - 1.0)};
                        },
                    },
                    law_);
}

double ClaimDistribution::quantile_from_tail(double s) const {
  if (s >= 1.0) return 0.0;
  if (s <= 0.0) return kInfinity;
  return std::visit(Overloaded{
                        [&](const Exponential& e) { return -std::log(s) / e.rate; },
                        [&](const Pareto& p) { return std::expm1(-std::log(s) / p.shape); },
                    },
                    law_);
}

double ClaimDistribution::mean() const {
  return std::visit(Overloaded{
                        [](const Exponential& e) { return 1.0 / e.rate; },
                        [](const Pareto& p) { return 1.0 / (p.shape - 1.0); },
                    },
                    law_);
}

double ClaimDistribution::mgf_domain_sup() const {
  if (const auto* e = std::get_if<Exponential>(&law_)) return e->rate;
  throw DomainError("moment generating function of " + name() + " is infinite for every positive argument");
}

double ClaimDistribution::mgf(double alpha) const {
  const double sup = mgf_domain_sup();
  if (!(alpha < sup)) {
    std::ostringstream os;
    os << "mgf argument " << alpha << " outside the domain (-inf, " << sup << ") of " << name();
    throw DomainError(os.str());
  }
  return sup / (sup - alpha);
}

double ClaimDistribution::partial_moment(int k, double lo, double hi) const {
  if (k < 0 || k > 2) throw DomainError("partial_moment supports k = 0, 1, 2");
  lo = std::max(lo, 0.0);
  if (!(hi > lo)) return 0.0;
  return std::visit(
      Overloaded{
          [&](const Exponential& e) {
            if (k == 0) {
              if (std::isinf(hi)) return std::exp(-e.rate * lo);
              return std::exp(-e.rate * lo) * -std::expm1(-e.rate * (hi - lo));
            }
            return exp_tail_moment(e.rate, k, lo) - exp_tail_moment(e.rate, k, hi);
          },
          [&](const Pareto& p) {
            const double t1 = 1.0 + lo;
            const double t2 = std::isinf(hi) ? kInfinity : 1.0 + hi;
            const double m0 = k == 0 && !std::isinf(hi)
                                  ? tail(lo) * -std::expm1(-p.shape * std::log(t2 / t1))
                                  : pareto_t_moment(p.shape, 0, t1, t2);
            if (k == 0) return m0;
            const double m1 = pareto_t_moment(p.shape, 1, t1, t2);
            if (std::isinf(m1)) return kInfinity;
            if (k == 1) return m1 - m0;
            const double m2 = pareto_t_moment(p.shape, 2, t1, t2);
            if (std::isinf(m2)) return kInfinity;
            return m2 - 2.0 * m1 + m0;
          },
      },
      law_);
}

double retention(const RetentionSpec& /*spec*/, double y, double u) { return u * y; }

double retention_inverse(const RetentionSpec& /*spec*/, double x, double u) {
  if (u <= 0.0) return kInfinity;
  return x / u;
}

PenaltyFunction PenaltyFunction::w1() {
  return PenaltyFunction(Kind::W1, [](double, double) { return 1.0; }, 1.0);
}

PenaltyFunction PenaltyFunction::w2() {
  return PenaltyFunction(
      Kind::W2,
      [](double x, double y) { return std::min(kW2Cap, (x + 0.5) * (y + 1.0) * (y + 1.0)); },
      kW2Cap);
}

PenaltyFunction PenaltyFunction::custom(Evaluator eval, double bound) {
  require(static_cast<bool>(eval), "custom penalty needs an evaluator");
  require(std::isfinite(bound) && bound >= 0.0, "custom penalty needs a finite nonnegative bound");
  return PenaltyFunction(Kind::Custom, std::move(eval), bound);
}

std::string PenaltyFunction::name() const {
  switch (kind_) {
    case Kind::W1:
      return "w1";
    case Kind::W2:
      return "w2";
    default:
      return "custom";
  }
}

double PenaltyFunction::operator()(double surplus_prior, double deficit) const {
  const double v = eval_(surplus_prior, deficit);
  if (kind_ == Kind::Custom && !(v >= 0.0 && v <= bound_)) {
    std::ostringstream os;
    os << "custom penalty value " << v << " at (" << surplus_prior << ", " << deficit
       << ") outside [0, " << bound_ << "]";
    throw DomainError(os.str());
  }
  return v;
}

void Model::validate() const { params.validate(); }

}  // namespace reins
