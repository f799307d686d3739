#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "reins/grid.hpp"
#include "reins/model.hpp"

namespace reins {

/// A claim integral produced a non-finite value.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double x, double u);
  double x() const { return x_; }
  double u() const { return u_; }

 private:
  double x_;
  double u_;
};

namespace detail {

// 10-point Gauss-Legendre nodes and weights on [-1, 1] (positive half).
inline constexpr std::array<double, 5> kGaussNodes = {
    0.1488743389816312108848260, 0.4333953941292471907992659, 0.6794095682990244062343274,
    0.8650633666889845107320967, 0.9739065285171717200779640};
inline constexpr std::array<double, 5> kGaussWeights = {
    0.2955242247147528701738930, 0.2692667193099963550912269, 0.2190863625159820439955349,
    0.1494513491505805931457763, 0.0666713443086881375935688};

template <class F>
double gauss_legendre_panel(F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
    const double dx = half * kGaussNodes[i];
    sum += kGaussWeights[i] * (f(mid - dx) + f(mid + dx));
  }
  return sum * half;
}

template <class F>
double adaptive_gauss_legendre(F& f, double a, double b, double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gauss_legendre_panel(f, a, mid);
  const double right = gauss_legendre_panel(f, mid, b);
  const double refined = left + right;
  if (depth <= 0 || std::abs(refined - whole) <= tol) return refined;
  return adaptive_gauss_legendre(f, a, mid, left, 0.5 * tol, depth - 1) +
         adaptive_gauss_legendre(f, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive 10-point Gauss-Legendre quadrature of f over [a, b] to an
/// absolute tolerance; panels are bisected until halves agree.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-9, int max_depth = 40) {
  if (!(b > a)) return 0.0;
  const double whole = detail::gauss_legendre_panel(f, a, b);
  return detail::adaptive_gauss_legendre(f, a, b, whole, abs_tol, max_depth);
}

/// Visits (node index, weight) pairs such that the sum of weight * f[index]
/// equals the survival integral of the piecewise linear `f` on `grid`:
///
///   integral over [0, rho(x,u)] of f(x - u*y) dF(y).
///
/// The linear interpolant is integrated exactly cell by cell, so the visitor
/// sees at most two contributions per grid cell below x.
template <class Visit>
void visit_survival_weights(const Grid& grid, double x, double u, const ClaimDistribution& dist,
                            Visit&& visit) {
  if (x < grid.lo()) return;
  if (u <= 0.0) {
    if (x >= grid.hi()) {
      visit(grid.last(), 1.0);
      return;
    }
    const Index k = grid.cell(x);
    const double t = (x - grid.node(k)) / grid.spacing();
    if (t == 0.0) {
      visit(k, 1.0);
    } else {
      visit(k, 1.0 - t);
      visit(k + 1, t);
    }
    return;
  }
  const double h = grid.spacing();
  double z_top = x;
  auto upper = dist.tail_moments(0.0);
  if (x > grid.hi()) {
    // constant continuation above the grid
    const auto lower = dist.tail_moments((x - grid.hi()) / u);
    visit(grid.last(), upper.mass - lower.mass);
    upper = lower;
    z_top = grid.hi();
  }
  for (Index k = grid.cell(z_top); k >= 0; --k) {
    const double z_a = grid.node(k);
    const double z_b = std::min(grid.node(k + 1), z_top);
    if (z_b <= z_a) continue;
    const auto lower = dist.tail_moments((x - z_a) / u);
    const double p0 = upper.mass - lower.mass;
    const double p1 = upper.first - lower.first;
    upper = lower;
    const double z_next = grid.node(k + 1);
    visit(k, ((z_next - x) * p0 + u * p1) / h);
    visit(k + 1, ((x - z_a) * p0 - u * p1) / h);
  }
}

/// Integral over [0, rho(x,u)] of f(x - r(y,u)) dF(y); equals f(x) for u = 0.
double survival_integral(const GridFunction& f, double x, double u, const ClaimDistribution& dist,
                         const RetentionSpec& spec);

/// Integral over [rho(x,u), inf) of w(x, r(y,u) - x) dF(y); zero for u = 0.
/// W1 and W2 use closed-form partial moments, custom penalties use
/// ruin_integral_quadrature.
double ruin_integral(const PenaltyFunction& w, double x, double u, const ClaimDistribution& dist,
                     const RetentionSpec& spec);

/// Ruin integral by adaptive Gauss-Legendre after the substitution
/// s = 1 - F(y), which maps [rho, inf) onto the finite interval (0, 1 - F(rho)].
double ruin_integral_quadrature(const PenaltyFunction& w, double x, double u,
                                const ClaimDistribution& dist, const RetentionSpec& spec,
                                double abs_tol = 1e-9);

}  // namespace reins
