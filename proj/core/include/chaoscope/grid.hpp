#ifndef CHAOSCOPE_GRID_HPP
#define CHAOSCOPE_GRID_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace chaoscope {

/// Periodic rectangular grid: N^d points on a torus of side L.
struct GridSpec {
  int dimension = 1;
  int points_per_side = 8;   // power of two, >= 8
  double side_length = 1.0;  // physical units
  std::array<double, 3> origin{0.0, 0.0, 0.0};

  void validate() const;
  std::size_t num_points() const;
  double spacing() const { return side_length / points_per_side; }
  double cell_volume() const;
  /// lattice frequency magnitude |w| for the flattened index
  double frequency_magnitude(std::size_t flat_index) const;
  /// physical coordinates of a grid point
  std::array<double, 3> point(std::size_t flat_index) const;
};

struct FieldMeta {
  std::string kind;  // martingale_t | conv_eps | W_t | Z_t | sum
  double t = 0.0;
  double eps = 0.0;
  double a_const = 0.0;
  std::string kernel_id;
  std::string mollifier_id;
  uint64_t rng_seed = 0;
  int layer_count = 0;
  std::string config_hash;
};

/// One realization of a Gaussian field on a periodic grid. Not mutated
/// after creation.
struct GridField {
  GridSpec grid;
  std::vector<double> values;
  FieldMeta meta;
};

}  // namespace chaoscope

#endif
