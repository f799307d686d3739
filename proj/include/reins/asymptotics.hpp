#pragma once

#include <stdexcept>

#include "reins/model.hpp"

namespace reins {

/// The claim law has no finite moment generating function near 0.
class NoAdjustmentCoefficient : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The Lundberg equation has no positive root for the requested control.
class NoPositiveRoot : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct AdjustmentCoefficient {
  double gamma;
  double strategy_u;
};

/// lambda*(m(u*gamma) - 1) - delta - c(u)*gamma for a constant proportional
/// control u. Positive roots in gamma are adjustment coefficients.
double lundberg_residual(double gamma, double u, const ModelParams& params, const ClaimDistribution& dist);

/// Positive root of the discounted Lundberg equation for the constant
/// control u in (premium_zero, 1].
AdjustmentCoefficient adjustment_coefficient(double u, const ModelParams& params, const ClaimDistribution& dist);

/// Closed-form asymptotically optimal constant control for exponential claims:
///
///   u* = lambda (theta - eta) (1 - sqrt(1/(1+theta)))
///        / (delta + 2 lambda (1 - sqrt(1+theta)) + theta lambda)
///
/// It does not depend on the mean claim size.
double asymptotic_optimal_u(const ModelParams& params, const ClaimDistribution& dist);

struct AdjustmentMaximum {
  double u;
  AdjustmentCoefficient coefficient;
};

/// Maximizes gamma(u) over (premium_zero, 1] by golden-section search.
AdjustmentMaximum maximize_adjustment_coefficient(const ModelParams& params, const ClaimDistribution& dist,
                                                  double tol = 1e-8);

}  // namespace reins
