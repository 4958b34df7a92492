#include "chaoscope/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chaoscope {

void GridSpec::validate() const {
  if (dimension < 1 || dimension > 3)
    throw std::invalid_argument("GridSpec: dimension must be 1, 2, or 3");
  if (points_per_side < 8 ||
      (points_per_side & (points_per_side - 1)) != 0)
    throw std::invalid_argument(
        "GridSpec: points_per_side must be a power of two >= 8");
  if (!(side_length > 0.0))
    throw std::invalid_argument("GridSpec: side_length must be positive");
}

std::size_t GridSpec::num_points() const {
  std::size_t n = 1;
  for (int i = 0; i < dimension; ++i) n *= points_per_side;
  return n;
}

double GridSpec::cell_volume() const {
  return std::pow(spacing(), dimension);
}

double GridSpec::frequency_magnitude(std::size_t flat_index) const {
  const int n = points_per_side;
  const double base = 2.0 * std::numbers::pi / side_length;
  double sum = 0.0;
  std::size_t rest = flat_index;
  for (int axis = dimension - 1; axis >= 0; --axis) {
    int idx = static_cast<int>(rest % n);
    rest /= n;
    if (idx > n / 2) idx -= n;  // wrapped DFT index
    const double w = base * idx;
    sum += w * w;
  }
  return std::sqrt(sum);
}

std::array<double, 3> GridSpec::point(std::size_t flat_index) const {
  const int n = points_per_side;
  std::array<double, 3> x{0.0, 0.0, 0.0};
  std::size_t rest = flat_index;
  for (int axis = dimension - 1; axis >= 0; --axis) {
    const int idx = static_cast<int>(rest % n);
    rest /= n;
    x[axis] = origin[axis] + spacing() * idx;
  }
  return x;
}

}  // namespace chaoscope
