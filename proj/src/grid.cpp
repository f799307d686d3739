#include "reins/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "reins/model.hpp"

namespace reins {

Grid::Grid(double lo, double hi, Index n_points) : lo_(lo), hi_(hi), n_(n_points) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && hi > lo)) {
    std::ostringstream os;
    os << "grid needs 0 <= lo < hi, got [" << lo << ", " << hi << "]";
    throw DomainError(os.str());
  }
  if (n_points < 3) throw DomainError("grid needs at least 3 points");
  h_ = (hi - lo) / static_cast<double>(n_points - 1);
}

Eigen::VectorXd Grid::nodes() const {
  Eigen::VectorXd x(n_);
  for (Index i = 0; i < n_; ++i) x[i] = node(i);
  return x;
}

namespace {

double interpolate(const Grid& grid, const Eigen::VectorXd& v, double x) {
  const Index k = grid.cell(x);
  const double t = (x - grid.node(k)) / grid.spacing();
  return (1.0 - t) * v[k] + t * v[k + 1];
}

}  // namespace

GridFunction::GridFunction(Grid grid, Eigen::VectorXd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw DomainError("grid function length does not match its grid");
  if (!values_.allFinite()) throw DomainError("grid function values must be finite");
}

GridFunction GridFunction::constant(const Grid& grid, double value) {
  return GridFunction(grid, Eigen::VectorXd::Constant(grid.size(), value));
}

double GridFunction::operator()(double x) const {
  if (x < grid_.lo()) return 0.0;
  if (x >= grid_.hi()) return values_[grid_.last()];
  return interpolate(grid_, values_, x);
}

Strategy::Strategy(Grid grid, Eigen::VectorXd controls) : grid_(grid), controls_(std::move(controls)) {
  if (controls_.size() != grid_.size()) throw DomainError("strategy length does not match its grid");
  for (Index i = 0; i < controls_.size(); ++i) {
    if (!(controls_[i] >= 0.0 && controls_[i] <= 1.0)) {
      std::ostringstream os;
      os << "control " << controls_[i] << " at node " << i << " outside [0, 1]";
      throw DomainError(os.str());
    }
  }
}

Strategy Strategy::constant(const Grid& grid, double u) {
  return Strategy(grid, Eigen::VectorXd::Constant(grid.size(), u));
}

double Strategy::operator()(double x) const {
  if (x <= grid_.lo()) return controls_[0];
  if (x >= grid_.hi()) return controls_[grid_.last()];
  return interpolate(grid_, controls_, x);
}

}  // namespace reins
