#pragma once

// L1 and W^{1,1} norm estimation for kernel-type fields on the unit cube or
// the slab (0,1) x R^{n-1}, optionally intersected with or punctured by a ball
// around the pole.  All integration runs in scaled coordinates
// xi_hat = (xi - center)/eps with d xi = eps^n d xi_hat.
//
// The domain is split into
//   * a box of half-width h around the pole, cut into 2n pyramids with apex
//     at the pole (radial grading, logarithmic when a ball is removed),
//   * graded Cartesian boxes covering the rest, refined geometrically away
//     from the pole and towards the outflow face xi_1 = 1,
//   * spherical cells for ball regions and wake (psi) coordinates for the
//     downstream subdomain,
// and each piece is integrated with an embedded degree-7/5 Genz-Malik rule
// under global adaptive bisection of the cell with the largest error.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "layergreen/kernel.hpp"

namespace layergreen::quadrature {

/// One integration node: physical point xi and its scaled offset from the
/// region center.  Only the first dim entries are meaningful.
struct SamplePoint {
  std::array<double, 3> xi{};
  std::array<double, 3> xi_hat{};
  int dim = 3;

  [[nodiscard]] std::span<const double> physical() const {
    return {xi.data(), static_cast<std::size_t>(dim)};
  }
  [[nodiscard]] std::span<const double> scaled() const {
    return {xi_hat.data(), static_cast<std::size_t>(dim)};
  }
};

using ScalarField = std::function<double(const SamplePoint&)>;
/// Value and gradient (second derivatives are ignored).
using BundleField = std::function<DerivativeBundle(const SamplePoint&)>;
/// Writes one value per component into `out`.
using VectorField = std::function<void(const SamplePoint&, std::span<double> out)>;

enum class BaseDomain { unit_cube, slab };
enum class Modifier { none, intersect_ball, minus_ball, proof_subdomain };

/// Subdomains of the scaled frame used in the lower-bound argument:
///   omega1_cone  - B(0,1) with xi_1^2 >= xi_2^2 + xi_3^2,
///   omega2_wake  - max(1, |xi_transverse|) <= xi_1 <= 1/(4 eps),
///   omega3_cone2 - B(0, rho_hat) with xi_2^2 >= xi_1^2 + xi_3^2.
enum class ProofTag { omega1_cone, omega2_wake, omega3_cone2 };

/// Integration region.  Balls and proof subdomains are centred at `center`,
/// which is also the origin of the scaled frame (normally the pole x).
struct Region {
  BaseDomain base = BaseDomain::unit_cube;
  int dim = 3;
  std::array<double, 3> center{0.5, 0.5, 0.5};
  Modifier modifier = Modifier::none;
  double rho = 0.0;
  ProofTag tag = ProofTag::omega1_cone;

  static Region unit_cube(std::span<const double> center);
  static Region slab(std::span<const double> center);

  /// 0 < rho <= 1/8 and the ball must lie inside the base domain.
  [[nodiscard]] Region intersect_ball(double radius) const;
  [[nodiscard]] Region minus_ball(double radius) const;
  /// `radius` is used by omega3_cone2 only.
  [[nodiscard]] Region proof_subdomain(ProofTag which, double radius = 0.0) const;
};

/// Wake coordinates psi_k = xi_hat_k / sqrt(2 xi_hat_1), xi_hat_1 >= 1.
struct WakeCoords {
  double xi_hat_1 = 1.0;
  double psi_2 = 0.0;
  double psi_3 = 0.0;

  static WakeCoords from_scaled(std::span<const double> xi_hat);
  [[nodiscard]] std::array<double, 3> to_scaled() const;
  /// d xi_hat_2 d xi_hat_3 = jacobian() d psi_2 d psi_3.
  [[nodiscard]] double jacobian() const { return 2.0 * xi_hat_1; }
};

struct NormEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double rel_tol = 1e-4;
  double abs_tol = 0.0;
  /// The initial layout is always evaluated; a run that ends above the
  /// budget is reported as not converged.
  std::size_t max_evaluations = 20'000'000;
  /// 0 = worker_count().  Results do not depend on this value.
  int threads = 0;
};

/// Integral of |field| over the region.
NormEstimate l1_norm(const ScalarField& field, const Region& region, const ProblemParams& params,
                     double rel_tol);
NormEstimate l1_norm(const ScalarField& field, const Region& region, const ProblemParams& params,
                     const QuadratureOptions& options);

/// Integral of |value| + sum_k |d_k value| over the region, one pass.
NormEstimate w11_norm(const BundleField& field, const Region& region, const ProblemParams& params,
                      double rel_tol);
NormEstimate w11_norm(const BundleField& field, const Region& region, const ProblemParams& params,
                      const QuadratureOptions& options);

/// Integrals of |component_k| for several components sharing the cells;
/// each component is refined to its own relative tolerance.
std::vector<NormEstimate> l1_norms(const VectorField& field, std::size_t components,
                                   const Region& region, const ProblemParams& params,
                                   const QuadratureOptions& options);

/// Signed integral of the field (no absolute value).
NormEstimate integrate(const ScalarField& field, const Region& region, const ProblemParams& params,
                       const QuadratureOptions& options);

/// Brute-force reference: tensor midpoint grid in scaled coordinates with a
/// block around the pole replaced by a fine pyramid midpoint sum.  The error
/// estimate is the change from the half-resolution run.  Not defined for proof
/// subdomains.  n_per_axis in [4, 512].
NormEstimate oracle_riemann(const ScalarField& field, const Region& region,
                            const ProblemParams& params, int n_per_axis);

/// Scaled transverse half-width at which the slab is truncated: beyond it the
/// wake factor exp(-alpha (r - xi_1)) is below 1e-18 for every xi_1 in the slab.
double slab_truncation(const ProblemParams& params, double center_x1);

}  // namespace layergreen::quadrature
