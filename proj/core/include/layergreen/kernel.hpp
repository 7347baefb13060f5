#pragma once

// Free-space fundamental solution of the adjoint convection-diffusion(-reaction)
// operator  -eps*Laplace + 2*alpha*d/dxi_1 (+ beta)  and its derivatives.
//
// All evaluations work in scaled coordinates xi_hat = (xi - x)/eps.  The
// exponential factor is always formed as exp(combined exponent) with the
// exponent assembled first, so no intermediate overflows for small eps.

#include <array>
#include <span>

namespace layergreen {

/// Problem parameters.  gamma = sqrt(alpha^2 + eps*beta) is derived.
class ProblemParams {
 public:
  /// Throws DomainError unless eps in (0,1], alpha > 0, beta >= 0, dim >= 2.
  static ProblemParams make(double eps, double alpha, double beta = 0.0, int dim = 3);

  [[nodiscard]] double eps() const noexcept { return eps_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  /// gamma - alpha = eps*beta/(gamma + alpha), formed without cancellation.
  [[nodiscard]] double gamma_excess() const noexcept { return gamma_excess_; }

 private:
  ProblemParams(double eps, double alpha, double beta, int dim);
  double eps_;
  double alpha_;
  double beta_;
  int dim_;
  double gamma_;
  double gamma_excess_;
};

/// Scaled coordinates of xi relative to a pole.  Only the first dim entries of
/// xi_hat are meaningful; unused entries are zero.
struct ScaledFrame {
  std::array<double, 3> xi_hat{};
  double r_hat = 0.0;
  /// r_hat - xi_hat[0], evaluated without cancellation on the downstream side.
  double r_minus_xi1 = 0.0;
  int dim = 3;
};

/// Frame from scaled offsets directly.
ScaledFrame frame_from_offset(std::span<const double> xi_hat);

/// xi_hat_1 = (xi_1 - shift)/eps, xi_hat_k = (xi_k - x_k)/eps for k >= 2.
ScaledFrame make_frame(std::span<const double> x, std::span<const double> xi,
                       const ProblemParams& params, double shift);

/// Kernel value, gradient and diagonal Hessian with respect to xi.
struct DerivativeBundle {
  double g = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  double d11 = 0.0;
  double d22 = 0.0;
  double d33 = 0.0;

  [[nodiscard]] double grad(int axis) const { return axis == 0 ? d1 : axis == 1 ? d2 : d3; }
  [[nodiscard]] double hess(int axis) const { return axis == 0 ? d11 : axis == 1 ? d22 : d33; }
  double& grad_ref(int axis) { return axis == 0 ? d1 : axis == 1 ? d2 : d3; }
  double& hess_ref(int axis) { return axis == 0 ? d11 : axis == 1 ? d22 : d33; }
  [[nodiscard]] double laplacian() const { return d11 + d22 + d33; }

  DerivativeBundle& operator+=(const DerivativeBundle& o);
  DerivativeBundle& operator-=(const DerivativeBundle& o);
  DerivativeBundle& operator*=(double s);
};

DerivativeBundle operator+(DerivativeBundle a, const DerivativeBundle& b);
DerivativeBundle operator-(DerivativeBundle a, const DerivativeBundle& b);
DerivativeBundle operator*(double s, DerivativeBundle a);

/// Adjoint operator applied to a bundle: -eps*Laplace + 2*alpha*d1 + beta.
double adjoint_residual(const ProblemParams& params, const DerivativeBundle& b);

/// 3D convection-diffusion kernel (1/(4 pi eps^2)) e^{alpha(xi1 - r)}/r.
/// Throws PoleError at r_hat = 0.
double g3(const ProblemParams& params, const ScaledFrame& frame);

/// Value, first and diagonal second derivatives of g3.
double g3_exponent(const ProblemParams& params, const ScaledFrame& frame);
DerivativeBundle g3_derivs(const ProblemParams& params, const ScaledFrame& frame);

/// 3D convection-reaction-diffusion kernel (1/(4 pi eps^2)) e^{alpha xi1 - gamma r}/r.
/// Reduces bit-identically to g3 when beta = 0.
double g_crd(const ProblemParams& params, const ScaledFrame& frame);
DerivativeBundle g_crd_derivs(const ProblemParams& params, const ScaledFrame& frame);

/// n-dimensional kernel via K_{n/2-1}.  For dim = 3 this equals g3.
double g_nd(const ProblemParams& params, const ScaledFrame& frame);

/// 2D kernel (1/(2 pi eps)) e^{alpha xi1} K_0(alpha r) with gradient and
/// diagonal Hessian (d3, d33 are zero).
DerivativeBundle g2d_derivs(const ProblemParams& params, const ScaledFrame& frame);

/// Kernel bundle multiplied by exp(log_weight), with the weight folded into
/// the exponent before exponentiation.  Dispatches on params.dim(): dim = 3
/// uses g_crd_derivs, dim = 2 uses g2d_derivs.  Returns an all-zero bundle
/// when the combined exponent underflows.
DerivativeBundle weighted_kernel_derivs(const ProblemParams& params, const ScaledFrame& frame,
                                        double log_weight);

/// Value-only counterpart of weighted_kernel_derivs.
double weighted_kernel_value(const ProblemParams& params, const ScaledFrame& frame,
                             double log_weight);

}  // namespace layergreen
