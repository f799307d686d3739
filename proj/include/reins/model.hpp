#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

namespace reins {

/// Raised when an input lies outside the domain an operation is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Scalar inputs of the controlled Cramer-Lundberg model.
///
/// Premiums follow the expected value principle with cedent loading `eta`
/// and reinsurer loading `theta`; the reinsurer must be dearer than the
/// cedent (`theta > eta`) so that full reinsurance yields a negative drift.
struct ModelParams {
  double lambda = 1.0;  ///< claim intensity
  double beta = 1.0;    ///< expected claim height
  double eta = 0.5;     ///< cedent safety loading
  double theta = 0.7;   ///< reinsurer safety loading
  double delta = 0.05;  ///< discount rate

  /// Throws DomainError when an invariant is violated.
  void validate() const;

  double gross_premium() const { return lambda * beta * (1.0 + eta); }
};

/// Premium rate c(u) = lambda*beta*(eta - theta + u*(1 + theta)).
inline double premium(const ModelParams& params, double u) {
  return params.lambda * params.beta * (params.eta - params.theta + u * (1.0 + params.theta));
}

/// The control u0 = (theta - eta)/(1 + theta) at which the premium vanishes.
double premium_zero(const ModelParams& params);

struct Exponential {
  double rate = 1.0;
};

/// Pareto law with F(y) = 1 - (1 + y)^(-shape).
struct Pareto {
  double shape = 2.0;
};

/// Claim-size law on (0, inf).
class ClaimDistribution {
 public:
  using Law = std::variant<Exponential, Pareto>;

  explicit ClaimDistribution(Law law);

  static ClaimDistribution exponential(double rate) { return ClaimDistribution(Exponential{rate}); }
  static ClaimDistribution pareto(double shape) { return ClaimDistribution(Pareto{shape}); }

  const Law& law() const { return law_; }
  bool is_exponential() const { return std::holds_alternative<Exponential>(law_); }
  bool is_pareto() const { return std::holds_alternative<Pareto>(law_); }
  std::string name() const;

  double cdf(double y) const;
  /// 1 - F(y), computed without cancellation.
  double tail(double y) const;
  double density(double y) const;
  /// Inverse CDF for p in [0, 1); returns +inf at p = 1.
  double quantile(double p) const;
  double mean() const;

  /// True when the moment generating function is finite on some (0, a).
  bool light_tailed() const { return is_exponential(); }
  /// Supremum of the arguments where the MGF is finite; throws for heavy tails.
  double mgf_domain_sup() const;
  /// E[exp(alpha * Y)]; throws DomainError outside the finite domain.
  double mgf(double alpha) const;

  /// E[Y^k ; lo < Y <= hi] for k in {0, 1, 2}; `hi` may be +inf.
  /// Returns +inf when the requested tail moment diverges.
  double partial_moment(int k, double lo, double hi) const;

  /// E[1 ; Y > y] and E[Y ; Y > y] in one pass.
  struct TailMoments {
    double mass;
    double first;
  };
  TailMoments tail_moments(double y) const;

  /// The claim size y with tail(y) = s, for s in (0, 1].
  double quantile_from_tail(double s) const;

  /// Draw a claim from a uniform variate in (0, 1) by inversion of the tail,
  /// which avoids the log1p of inverting the CDF directly.
  double sample_from_uniform(double uniform) const { return quantile_from_tail(uniform); }

 private:
  Law law_;
};

/// Retention function r(y, u). Only proportional retention is provided.
struct RetentionSpec {
  enum class Kind { Proportional };
  Kind kind = Kind::Proportional;
};

/// Part r(y, u) = u*y of a claim y paid by the cedent.
double retention(const RetentionSpec& spec, double y, double u);

/// Claim size rho(x, u) whose retained part equals x; +inf when u = 0.
double retention_inverse(const RetentionSpec& spec, double x, double u);

/// Bounded penalty w(surplus prior to ruin, deficit at ruin).
class PenaltyFunction {
 public:
  enum class Kind { W1, W2, Custom };
  using Evaluator = std::function<double(double, double)>;

  /// w(x, y) = 1: discounted ruin probability.
  static PenaltyFunction w1();
  /// w(x, y) = min(1e10, (x + 0.5)(y + 1)^2).
  static PenaltyFunction w2();
  /// Caller-supplied penalty with a finite bound. Evaluating it outside
  /// [0, bound] raises DomainError.
  static PenaltyFunction custom(Evaluator eval, double bound);

  Kind kind() const { return kind_; }
  double bound() const { return bound_; }
  std::string name() const;

  double operator()(double surplus_prior, double deficit) const;

  static constexpr double kW2Cap = 1e10;

 private:
  PenaltyFunction(Kind kind, Evaluator eval, double bound)
      : kind_(kind), eval_(std::move(eval)), bound_(bound) {}

  Kind kind_;
  Evaluator eval_;
  double bound_;
};

/// Everything needed to describe one controlled risk model.
struct Model {
  ModelParams params;
  ClaimDistribution claims = ClaimDistribution::exponential(1.0);
  RetentionSpec retention;
  PenaltyFunction penalty = PenaltyFunction::w1();

  void validate() const;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace reins
