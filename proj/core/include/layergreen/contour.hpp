#pragma once

// Marching-squares isolines on a rectilinear grid.

#include <array>
#include <cstddef>
#include <vector>

namespace layergreen::contour {

/// values[j * x.size() + i] is the sample at (x[i], y[j]).  +inf is allowed
/// (treated as above every level); NaN is not.
struct Grid {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> values;

  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return values[j * x.size() + i]; }
};

struct Polyline {
  std::vector<std::array<double, 2>> points;
  bool closed = false;
};

struct BoundingBox {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  [[nodiscard]] double width() const { return x_max - x_min; }
  [[nodiscard]] double height() const { return y_max - y_min; }
};

/// Isolines of `level`, stitched into polylines.  Saddle cells are resolved
/// with the cell-centre average.  Output order is deterministic.
std::vector<Polyline> isolines(const Grid& grid, double level);

/// Throws DomainError for an empty set of lines.
BoundingBox bounding_box(const std::vector<Polyline>& lines);

}  // namespace layergreen::contour
