#pragma once

#include "dwlab/grid.hpp"

#include <Eigen/Dense>

namespace dwlab::fft {

/// In-place unnormalized complex DFT over the grid's shape.
/// sign = -1 is the forward transform (exp(-i k x)).
void transform(const Grid& grid, Eigen::ArrayXcd& data, int sign);

}  // namespace dwlab::fft
