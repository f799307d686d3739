#include "reins/asymptotics.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace reins {

namespace {

void require_light_tail(const ClaimDistribution& dist) {
  if (!dist.light_tailed()) {
    throw NoAdjustmentCoefficient("no adjustment coefficient: the moment generating function of " + dist.name() +
                                  " is infinite for every positive argument");
  }
}

}  // namespace

double lundberg_residual(double gamma, double u, const ModelParams& params, const ClaimDistribution& dist) {
  return params.lambda * (dist.mgf(u * gamma) - 1.0) - params.delta - premium(params, u) * gamma;
}

AdjustmentCoefficient adjustment_coefficient(double u, const ModelParams& params, const ClaimDistribution& dist) {
  require_light_tail(dist);
  const double u0 = premium_zero(params);
  if (!(u > u0 && u <= 1.0)) {
    std::ostringstream os;
    os << "control " << u << " outside (" << u0 << ", 1]";
    throw DomainError(os.str());
  }
  const double sup = dist.mgf_domain_sup() / u;
  auto f = [&](double g) { return lundberg_residual(g, u, params, dist); };

  // geometric scan of (0, sup): away from 0 first, then towards sup
  std::vector<double> fractions;
  for (double s = 1e-12; s < 0.5; s *= 1.05) fractions.push_back(s);
  for (double q = 0.5; q > 1e-15; q /= 1.05) fractions.push_back(1.0 - q);
  double lo = 0.0;
  double hi = 0.0;
  bool bracketed = false;
  double prev = 0.0;
  double f_prev = -1.0;
  for (double s : fractions) {
    const double g = s * sup;
    const double fg = f(g);
    if (f_prev < 0.0 && fg >= 0.0 && prev > 0.0) {
      lo = prev;
      hi = g;
      bracketed = true;
      break;
    }
    prev = g;
    f_prev = fg;
  }
  if (!bracketed) {
    std::ostringstream os;
    os << "no positive root of the Lundberg equation at u=" << u << " (net profit condition fails)";
    throw NoPositiveRoot(os.str());
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double root = std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
  return {root, u};
}

double asymptotic_optimal_u(const ModelParams& params, const ClaimDistribution& dist) {
  if (!dist.is_exponential()) {
    throw DomainError("the closed-form asymptotic strategy only holds for exponential claims, not " + dist.name());
  }
  const double l = params.lambda;
  const double num = l * (params.theta - params.eta) * (1.0 - std::sqrt(1.0 / (1.0 + params.theta)));
  const double den = params.delta + 2.0 * l * (1.0 - std::sqrt(1.0 + params.theta)) + params.theta * l;
  return num / den;
}

AdjustmentMaximum maximize_adjustment_coefficient(const ModelParams& params, const ClaimDistribution& dist,
                                                  double tol) {
  require_light_tail(dist);
  auto gamma = [&](double u) {
    try {
      return adjustment_coefficient(u, params, dist).gamma;
    } catch (const NoPositiveRoot&) {
      return 0.0;
    }
  };
  constexpr double kInvPhi = 0.6180339887498949;
  double a = premium_zero(params);
  double b = 1.0;
  a += 1e-12 * (b - a);
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double gc = gamma(c);
  double gd = gamma(d);
  while (b - a > tol) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kInvPhi * (b - a);
      gc = gamma(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kInvPhi * (b - a);
      gd = gamma(d);
    }
  }
  // the maximum may sit on the boundary u = 1
  double u_best = 0.5 * (a + b);
  if (gamma(1.0) > gamma(u_best)) u_best = 1.0;
  const auto coefficient = adjustment_coefficient(u_best, params, dist);
  if (!(coefficient.gamma > 0.0)) throw NoPositiveRoot("no control admits a positive adjustment coefficient");
  return {u_best, coefficient};
}

}  // namespace reins
