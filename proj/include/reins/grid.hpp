#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

namespace reins {

using Index = Eigen::Index;

/// Uniform reserve grid x_i = lo + i*h, i = 0..n-1.
class Grid {
 public:
  Grid(double lo, double hi, Index n_points);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  Index size() const { return n_; }
  double spacing() const { return h_; }
  Index last() const { return n_ - 1; }

  double node(Index i) const { return i == n_ - 1 ? hi_ : lo_ + static_cast<double>(i) * h_; }
  Eigen::VectorXd nodes() const;

  /// Cell index k with node(k) <= x < node(k+1), clamped to [0, n-2].
  Index cell(double x) const {
    const double s = std::floor((x - lo_) / h_);
    if (!(s > 0.0)) return 0;
    return std::min(static_cast<Index>(s), n_ - 2);
  }

  bool operator==(const Grid& other) const = default;

 private:
  double lo_;
  double hi_;
  Index n_;
  double h_;
};

/// Piecewise linear function on a grid. Below `lo` it is 0, above `hi` it
/// continues with the value at `hi`.
class GridFunction {
 public:
  GridFunction(Grid grid, Eigen::VectorXd values);
  static GridFunction constant(const Grid& grid, double value);

  const Grid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  double operator[](Index i) const { return values_[i]; }

  double operator()(double x) const;

 private:
  Grid grid_;
  Eigen::VectorXd values_;
};

/// Markov control u(x) in [0, 1], stored at the grid nodes and linearly
/// interpolated in between. Outside the grid the nearest end value holds.
class Strategy {
 public:
  Strategy(Grid grid, Eigen::VectorXd controls);
  static Strategy constant(const Grid& grid, double u);

  const Grid& grid() const { return grid_; }
  const Eigen::VectorXd& controls() const { return controls_; }
  double operator[](Index i) const { return controls_[i]; }

  double operator()(double x) const;

  bool operator==(const Strategy& other) const {
    return grid_ == other.grid_ && controls_ == other.controls_;
  }

 private:
  Grid grid_;
  Eigen::VectorXd controls_;
};

}  // namespace reins
