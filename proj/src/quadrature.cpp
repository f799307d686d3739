#include "reins/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace reins {

namespace {

std::string describe(const char* what, double x, double u) {
  std::ostringstream os;
  os << what << " is not finite at x=" << x << ", u=" << u;
  return os.str();
}

double checked(double value, const char* what, double x, double u) {
  if (!std::isfinite(value)) throw QuadratureError(describe(what, x, u), x, u);
  return value;
}

// Integral over [y_lo, y_hi] of (x + 0.5) * (u*y - x + 1)^2 dF(y).
double w2_polynomial_part(double x, double u, double y_lo, double y_hi, const ClaimDistribution& dist) {
  const double m0 = dist.partial_moment(0, y_lo, y_hi);
  const double m1 = dist.partial_moment(1, y_lo, y_hi);
  const double m2 = dist.partial_moment(2, y_lo, y_hi);
  const double a = 1.0 - x;
  return (x + 0.5) * (u * u * m2 + 2.0 * u * a * m1 + a * a * m0);
}

}  // namespace

QuadratureError::QuadratureError(const std::string& what, double x, double u)
    : std::runtime_error(what), x_(x), u_(u) {}

double survival_integral(const GridFunction& f, double x, double u, const ClaimDistribution& dist,
                         const RetentionSpec& /*spec*/) {
  double sum = 0.0;
  const auto& v = f.values();
  visit_survival_weights(f.grid(), x, u, dist, [&](Index i, double w) { sum += w * v[i]; });
  return checked(sum, "survival integral", x, u);
}

double ruin_integral(const PenaltyFunction& w, double x, double u, const ClaimDistribution& dist,
                     const RetentionSpec& spec) {
  if (u <= 0.0) return 0.0;
  const double rho = retention_inverse(spec, x, u);
  switch (w.kind()) {
    case PenaltyFunction::Kind::W1:
      return checked(dist.tail(rho), "ruin integral", x, u);
    case PenaltyFunction::Kind::W2: {
      // the cap binds once the deficit exceeds sqrt(cap / (x + 0.5)) - 1
      const double deficit_cap = std::sqrt(PenaltyFunction::kW2Cap / (x + 0.5)) - 1.0;
      const double y_cap = std::max(rho, (x + deficit_cap) / u);
      const double value = w2_polynomial_part(x, u, rho, y_cap, dist) +
                           PenaltyFunction::kW2Cap * dist.tail(y_cap);
      return checked(value, "ruin integral", x, u);
    }
    default:
      return ruin_integral_quadrature(w, x, u, dist, spec);
  }
}

double ruin_integral_quadrature(const PenaltyFunction& w, double x, double u,
                                const ClaimDistribution& dist, const RetentionSpec& spec,
                                double abs_tol) {
  if (u <= 0.0) return 0.0;
  const double rho = retention_inverse(spec, x, u);
  if (std::isinf(rho)) return 0.0;
  // y = rho + t / (1 - t) maps [0, 1) onto [rho, inf); for polynomial tails
  // the Jacobian cancels the decay of the density, leaving a smooth integrand
  auto integrand = [&](double t) {
    const double y = rho + t / (1.0 - t);
    const double density = dist.density(y);
    if (density == 0.0) return 0.0;
    return w(x, retention(spec, y, u) - x) * density / ((1.0 - t) * (1.0 - t));
  };
  // dyadic panels towards t = 1 so that features far out in the tail, such as
  // a penalty cap, are resolved
  double total = 0.0;
  double a = 0.0;
  for (int k = 1; k <= 60; ++k) {
    const double b = 1.0 - std::ldexp(1.0, -k);
    total += integrate(integrand, a, b, abs_tol / 60.0);
    a = b;
  }
  return checked(total, "ruin integral", x, u);
}

}  // namespace reins
