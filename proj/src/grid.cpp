#include "dwlab/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dwlab {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

Grid::Grid(int dim, int points_per_axis, double box_length)
    : dim_(dim), points_(points_per_axis), box_length_(box_length) {
  if (dim < 1 || dim > 3) {
    throw std::invalid_argument("grid dimension must be 1, 2 or 3, got " +
                                std::to_string(dim));
  }
  if (points_per_axis < 8 || !is_power_of_two(points_per_axis)) {
    throw std::invalid_argument(
        "points per axis must be a power of two >= 8, got " +
        std::to_string(points_per_axis));
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw std::invalid_argument("box length must be positive and finite");
  }
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= points_per_axis;

  Eigen::ArrayXd xi2 = Eigen::ArrayXd::Zero(size_);
  for (int a = 0; a < dim_; ++a) {
    for (Eigen::Index i = 0; i < size_; ++i) {
      const double k = wavenumber(axis_index(i, a));
      xi2[i] += k * k;
    }
  }
  xi_abs_ = std::make_shared<const Eigen::ArrayXd>(xi2.sqrt());
  xi2_ = std::make_shared<const Eigen::ArrayXd>(std::move(xi2));
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

double Grid::volume() const { return std::pow(box_length_, dim_); }

double Grid::wavenumber(int j) const {
  return 2.0 * std::numbers::pi * signed_index(j) / box_length_;
}

int Grid::axis_index(Eigen::Index linear, int axis) const {
  for (int a = dim_ - 1; a > axis; --a) linear /= points_;
  return static_cast<int>(linear % points_);
}

bool Grid::is_nyquist(Eigen::Index linear) const {
  for (int a = 0; a < dim_; ++a) {
    if (axis_index(linear, a) == points_ / 2) return true;
  }
  return false;
}

Eigen::ArrayXd Grid::coordinate(int axis) const {
  Eigen::ArrayXd x(size_);
  const double h = spacing();
  for (Eigen::Index i = 0; i < size_; ++i) {
    x[i] = h * signed_index(axis_index(i, axis));
  }
  return x;
}

Grid make_grid(int dim, int points_per_axis, double box_length) {
  return Grid(dim, points_per_axis, box_length);
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(where) + ": grid mismatch");
  }
}

}  // namespace dwlab
