#pragma once

// Scaled-frame geometry shared by the adaptive integrator and the oracle.

#include <array>
#include <algorithm>
#include <cmath>

#include "layergreen/kernel.hpp"
#include "layergreen/quadrature.hpp"

namespace layergreen::quadrature::geometry {

struct ScaledBox {
  int dim = 3;
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};

  /// Smallest scaled distance from the origin (region center) to the boundary.
  [[nodiscard]] double inner_distance() const {
    double d = INFINITY;
    for (int k = 0; k < dim; ++k) {
      d = std::min({d, -lo[static_cast<std::size_t>(k)], hi[static_cast<std::size_t>(k)]});
    }
    return d;
  }
};

/// Base domain in scaled coordinates; validates the region.
ScaledBox scaled_domain(const Region& region, const ProblemParams& params);

/// Maps pyramid parameters to a scaled point and returns the Jacobian.
/// The pyramid has apex at the origin and base on the face `sign * e_axis` of
/// the box [-h, h]^dim.  Parameters are (radial, u[, v]) with u, v in [-1, 1].
///   radial_mode 0: t = s in [0, 1]
///   radial_mode 1: t = t0^(1-s), t0 = rho_hat/(h |dir|)   (outside the ball)
///   radial_mode 2: t = s * t0                            (inside the ball)
struct Pyramid {
  int dim = 3;
  int axis = 0;
  double sign = 1.0;
  double h = 1.0;
  double rho_hat = 0.0;
  int radial_mode = 0;

  double map(const double* param, double* xi_hat) const;
};

/// Spherical (3D) or polar (2D) cells around the origin with a chosen polar axis.
struct Spherical {
  int dim = 3;
  int polar_axis = 0;

  double map(const double* param, double* xi_hat) const;
};

/// Wake cells (xi_hat_1, sigma, phi) with |psi| = sigma * sqrt(xi_hat_1 / 2).
struct Wake {
  double map(const double* param, double* xi_hat) const;
};

}  // namespace layergreen::quadrature::geometry
