#pragma once

#include <Eigen/Dense>

#include <memory>

namespace dwlab {

/// Periodic box [-L/2, L/2)^dim with the same number of points on every axis.
///
/// Storage is row-major over the multi-index (last axis fastest), which is the
/// layout FFTW uses for its multi-dimensional plans. Index j on an axis maps to
/// the signed index j for j < N/2 and j - N otherwise; both the physical
/// coordinate (signed index times spacing) and the angular wavenumber
/// (2*pi*signed index / L) use it.
class Grid {
 public:
  Grid(int dim, int points_per_axis, double box_length);

  int dim() const { return dim_; }
  int points() const { return points_; }
  double box_length() const { return box_length_; }
  Eigen::Index size() const { return size_; }

  double spacing() const { return box_length_ / points_; }
  double cell_volume() const;
  double volume() const;

  int signed_index(int j) const { return j < points_ / 2 ? j : j - points_; }
  double wavenumber(int j) const;

  /// Per-axis index of a linear position.
  int axis_index(Eigen::Index linear, int axis) const;
  bool is_nyquist(Eigen::Index linear) const;

  /// |xi|^2 at every spectral position.
  const Eigen::ArrayXd& xi2() const { return *xi2_; }
  /// |xi| at every spectral position.
  const Eigen::ArrayXd& xi_abs() const { return *xi_abs_; }
  /// Physical coordinate along an axis at every linear position.
  Eigen::ArrayXd coordinate(int axis) const;

  /// Same shape with twice the points per axis (used for dealiased products).
  Grid refined() const { return Grid(dim_, 2 * points_, box_length_); }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.points_ == b.points_ &&
           a.box_length_ == b.box_length_;
  }

 private:
  int dim_;
  int points_;
  double box_length_;
  Eigen::Index size_;
  std::shared_ptr<const Eigen::ArrayXd> xi2_;
  std::shared_ptr<const Eigen::ArrayXd> xi_abs_;
};

Grid make_grid(int dim, int points_per_axis, double box_length);

void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace dwlab
