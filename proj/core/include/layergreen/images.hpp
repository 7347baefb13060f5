#pragma once

// Method-of-images approximations of the Green's function on the slab
// (0,1) x R^{n-1} and on the unit cube (0,1)^n, built from the free-space
// kernel with C^2 cut-offs so that the approximation vanishes on the boundary.

#include <array>
#include <span>
#include <vector>

#include "layergreen/kernel.hpp"

namespace layergreen::images {

struct CutoffValue {
  double omega = 0.0;
  double omega_prime = 0.0;
  double omega_double_prime = 0.0;
};

/// Quintic smoothstep on [1/6, 1/3]: 0 below, 1 above, C^2 at both junctions.
/// Throws DomainError for t outside [0, 1].
CutoffValue cutoff_eval(double t);

/// omega_0(t) = omega(1 - t) with its derivatives in t.
CutoffValue cutoff_reflected(double t);

/// Image weights lambda^-, lambda^+, p, stored as logarithms only.
struct ImageWeights {
  double lambda_minus_log = 0.0;  // 2 alpha (1 - x1)/eps
  double lambda_plus_log = 0.0;   // 2 alpha (1 + x1)/eps
  double p_log = 0.0;             // -2 alpha x1/eps

  static ImageWeights make(const ProblemParams& params, double x1);
};

enum class Domain { slab, cube };

/// Transverse reflection xi_axis -> center - xi_axis, multiplied by the cut-off
/// omega_0 (center 0) or omega_1 (center 2) evaluated at the unreflected xi_axis.
struct TransverseReflection {
  int axis = 1;
  double center = 0.0;
};

struct ImageTerm {
  int sign = 1;
  double weight_log = 0.0;
  double pole_shift = 0.0;
  /// Term carries the omega(xi_1) factor of the slab construction.
  bool xi1_cutoff = false;
  std::vector<TransverseReflection> reflections;
};

/// Flattened list of signed image terms.  Slab: 4 terms.  Cube: 4 * 3^(n-1).
struct ImageExpansion {
  std::vector<ImageTerm> terms;

  static ImageExpansion build(const ProblemParams& params, std::span<const double> x, Domain domain);

  /// Sum of all terms, evaluated term by term (independent of Approximation).
  [[nodiscard]] double evaluate(const ProblemParams& params, std::span<const double> x,
                                std::span<const double> xi) const;

  /// weight_log + kernel exponent of one term at xi (must be <= 0 in the domain).
  [[nodiscard]] static double combined_exponent(const ProblemParams& params, const ImageTerm& term,
                                                std::span<const double> x,
                                                std::span<const double> xi);
};

/// Approximation value, gradient, diagonal Hessian and defect phi = L* Gbar.
struct Jet {
  DerivativeBundle bundle;
  double phi = 0.0;
};

/// Evaluator for the slab or cube approximation with the pole fixed at x.
/// Cheap to copy; safe for concurrent use.
class Approximation {
 public:
  /// Slab: requires x_1 in (0,1).  Cube: requires x in [1/8, 7/8]^n.
  /// Reaction (beta > 0) is supported for dim = 3 only.
  Approximation(const ProblemParams& params, std::span<const double> x, Domain domain);

  /// xi in physical coordinates.  Throws PoleError at xi = x.
  [[nodiscard]] Jet jet(std::span<const double> xi) const;
  /// xi = x + eps * xi_hat; the pole term is evaluated from xi_hat directly.
  [[nodiscard]] Jet jet_offset(std::span<const double> xi_hat) const;

  [[nodiscard]] double value(std::span<const double> xi) const;
  [[nodiscard]] DerivativeBundle derivs(std::span<const double> xi) const { return jet(xi).bundle; }
  [[nodiscard]] double residual(std::span<const double> xi) const { return jet(xi).phi; }

  [[nodiscard]] const ProblemParams& params() const noexcept { return params_; }
  [[nodiscard]] const std::array<double, 3>& pole() const noexcept { return x_; }
  [[nodiscard]] Domain domain() const noexcept { return domain_; }
  [[nodiscard]] int dim() const noexcept { return params_.dim(); }

 private:
  using Point = std::array<double, 3>;
  [[nodiscard]] Jet evaluate(const Point& xi, const double* primary_offset) const;
  [[nodiscard]] Jet slab_jet(const Point& xi, const double* primary_offset) const;
  [[nodiscard]] Jet layered_jet(int layer, const Point& xi, const double* primary_offset) const;

  ProblemParams params_;
  Point x_{};
  Domain domain_;
  ImageWeights weights_;
};

/// Whether x lies where the lower-bound theory applies, [1/4, 3/4]^n.
bool in_validated_region(std::span<const double> x);

double gbar_slab(const ProblemParams& params, std::span<const double> x, std::span<const double> xi);
double gbar_cube(const ProblemParams& params, std::span<const double> x, std::span<const double> xi);
DerivativeBundle gbar_derivs(const ProblemParams& params, std::span<const double> x,
                             std::span<const double> xi, Domain which);
/// Defect L* Gbar, assembled from the cut-off commutator terms.
double residual_phi(const ProblemParams& params, std::span<const double> x,
                    std::span<const double> xi, Domain which);

}  // namespace layergreen::images
