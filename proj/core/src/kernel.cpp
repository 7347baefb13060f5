#include "layergreen/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "layergreen/error.hpp"
#include "layergreen/special.hpp"

namespace layergreen {

namespace {

constexpr double kInv4Pi = 1.0 / (4.0 * std::numbers::pi);
constexpr double kInv2Pi = 1.0 / (2.0 * std::numbers::pi);
// exp(x) is exactly zero in double precision below this.
constexpr double kUnderflowExponent = -746.0;

void require_off_pole(const ScaledFrame& f) {
  if (!(f.r_hat > 0.0)) {
    throw PoleError("kernel evaluated at its pole (r_hat = 0)");
  }
}

void require_dim(const ProblemParams& p, int dim, const char* op) {
  if (p.dim() != dim) {
    throw DomainError(std::string(op) + " requires dim = " + std::to_string(dim) + ", got " +
                      std::to_string(p.dim()));
  }
}

// alpha*xi1 - gamma*r = -alpha*(r - xi1) - (gamma - alpha)*r
double crd_exponent(const ProblemParams& p, const ScaledFrame& f) {
  return -p.alpha() * f.r_minus_xi1 - p.gamma_excess() * f.r_hat;
}

// Scaled 3D bundle (derivatives in xi_hat, no eps prefactors) without the
// exponential factor, for general gamma.
DerivativeBundle crd_bracket(const ProblemParams& p, const ScaledFrame& f) {
  const double a = p.alpha();
  const double c = p.gamma();
  const double ce = p.gamma_excess();
  const double r = f.r_hat;
  const double x1 = f.xi_hat[0];
  const double rmx = f.r_minus_xi1;
  const double r2 = r * r;
  const double r3 = r2 * r;

  DerivativeBundle b;
  b.g = 1.0 / r;

  const double e1 = (a * rmx - ce * x1) / r;  // d/dxi1 of the exponent
  b.d1 = (e1 - x1 / r2) / r;
  b.d11 = e1 * e1 / r - 2.0 * e1 * x1 / r3 - c * rmx * (r + x1) / (r2 * r2) - 1.0 / r3 +
          3.0 * x1 * x1 / (r3 * r2);
  for (int k = 1; k < 3; ++k) {
    const double xk = f.xi_hat[k];
    b.grad_ref(k) = -(c * r + 1.0) * xk / r3;
    b.hess_ref(k) = c * c * xk * xk / r3 + 2.0 * c * xk * xk / (r2 * r2) -
                    c * (r2 - xk * xk) / (r2 * r2) - 1.0 / r3 + 3.0 * xk * xk / (r3 * r2);
  }
  return b;
}

// Applies exp(exponent) and the eps^-(2,3,4) prefactors of the 3D kernel.
DerivativeBundle finish_3d(const ProblemParams& p, DerivativeBundle b, double exponent) {
  const double e = std::exp(exponent);
  const double eps = p.eps();
  const double s0 = kInv4Pi * e / (eps * eps);
  const double s1 = s0 / eps;
  const double s2 = s1 / eps;
  b.g *= s0;
  b.d1 *= s1;
  b.d2 *= s1;
  b.d3 *= s1;
  b.d11 *= s2;
  b.d22 *= s2;
  b.d33 *= s2;
  return b;
}

DerivativeBundle g2d_bundle(const ProblemParams& p, const ScaledFrame& f, double log_weight) {
  const double exponent = crd_exponent(p, f) + log_weight;
  if (exponent < kUnderflowExponent) {
    return {};
  }
  const double a = p.alpha();
  const double c = p.gamma();
  const double r = f.r_hat;
  const double x1 = f.xi_hat[0];
  const double x2 = f.xi_hat[1];
  const double z = c * r;
  const auto order0 = special::BesselOrder::from_twice(0);
  const double k0 = special::bessel_k_scaled(order0, z);
  const double ratio = special::bessel_k_ratio(order0, z);
  const double k1 = k0 * ratio;

  // h = e^{alpha xi1} F(r),  F = K0(c r):  F' = -c K1,  F'' = c^2 (K0 + K1/(c r)).
  const double fp = -c * k1;
  const double fpp = c * c * k0 + c * k1 / r;
  const double u1 = x1 / r;
  const double u2 = x2 / r;

  DerivativeBundle b;
  b.g = k0;
  // alpha F + F' xi1/r = k0 * (alpha (r - xi1)/r - (c - alpha) xi1/r - c (ratio - 1) xi1/r)
  b.d1 = k0 * (a * f.r_minus_xi1 / r - p.gamma_excess() * u1 - c * (ratio - 1.0) * u1);
  b.d2 = fp * u2;
  b.d11 = a * a * k0 + 2.0 * a * fp * u1 + fpp * u1 * u1 + fp * (1.0 - u1 * u1) / r;
  b.d22 = fpp * u2 * u2 + fp * (1.0 - u2 * u2) / r;

  const double e = std::exp(exponent);
  const double eps = p.eps();
  const double s0 = kInv2Pi * e / eps;
  const double s1 = s0 / eps;
  const double s2 = s1 / eps;
  b.g *= s0;
  b.d1 *= s1;
  b.d2 *= s1;
  b.d11 *= s2;
  b.d22 *= s2;
  return b;
}

}  // namespace

ProblemParams::ProblemParams(double eps, double alpha, double beta, int dim)
    : eps_(eps),
      alpha_(alpha),
      beta_(beta),
      dim_(dim),
      gamma_(beta == 0.0 ? alpha : std::sqrt(alpha * alpha + eps * beta)),
      gamma_excess_(beta == 0.0 ? 0.0 : eps * beta / (gamma_ + alpha)) {}

ProblemParams ProblemParams::make(double eps, double alpha, double beta, int dim) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw DomainError("eps must lie in (0, 1], got " + std::to_string(eps));
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("alpha must be positive, got " + std::to_string(alpha));
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be non-negative, got " + std::to_string(beta));
  }
  if (dim < 2) {
    throw DomainError("dim must be at least 2, got " + std::to_string(dim));
  }
  return {eps, alpha, beta, dim};
}

ScaledFrame frame_from_offset(std::span<const double> xi_hat) {
  if (xi_hat.size() < 2 || xi_hat.size() > 3) {
    throw DomainError("frames support dim 2 or 3");
  }
  ScaledFrame f;
  f.dim = static_cast<int>(xi_hat.size());
  double transverse2 = 0.0;
  for (std::size_t k = 0; k < xi_hat.size(); ++k) {
    f.xi_hat[k] = xi_hat[k];
    if (k > 0) {
      transverse2 += xi_hat[k] * xi_hat[k];
    }
  }
  const double x1 = f.xi_hat[0];
  f.r_hat = std::sqrt(x1 * x1 + transverse2);
  f.r_minus_xi1 = x1 > 0.0 ? transverse2 / (f.r_hat + x1) : f.r_hat - x1;
  return f;
}

ScaledFrame make_frame(std::span<const double> x, std::span<const double> xi,
                       const ProblemParams& params, double shift) {
  const auto dim = static_cast<std::size_t>(params.dim());
  if (x.size() != dim || xi.size() != dim) {
    throw DomainError("point dimension does not match params.dim()");
  }
  if (dim > 3) {
    // Only r_hat is needed in higher dimensions; keep xi_hat_1 and fold the
    // transverse distance into xi_hat_2.
    double transverse2 = 0.0;
    for (std::size_t k = 1; k < dim; ++k) {
      const double d = (xi[k] - x[k]) / params.eps();
      transverse2 += d * d;
    }
    const std::array<double, 3> off{(xi[0] - shift) / params.eps(), std::sqrt(transverse2), 0.0};
    ScaledFrame f = frame_from_offset(off);
    f.dim = static_cast<int>(dim);
    return f;
  }
  std::array<double, 3> off{};
  off[0] = (xi[0] - shift) / params.eps();
  for (std::size_t k = 1; k < dim; ++k) {
    off[k] = (xi[k] - x[k]) / params.eps();
  }
  return frame_from_offset(std::span<const double>(off.data(), dim));
}

DerivativeBundle& DerivativeBundle::operator+=(const DerivativeBundle& o) {
  g += o.g;
  d1 += o.d1;
  d2 += o.d2;
  d3 += o.d3;
  d11 += o.d11;
  d22 += o.d22;
  d33 += o.d33;
  return *this;
}

DerivativeBundle& DerivativeBundle::operator-=(const DerivativeBundle& o) {
  g -= o.g;
  d1 -= o.d1;
  d2 -= o.d2;
  d3 -= o.d3;
  d11 -= o.d11;
  d22 -= o.d22;
  d33 -= o.d33;
  return *this;
}

DerivativeBundle& DerivativeBundle::operator*=(double s) {
  g *= s;
  d1 *= s;
  d2 *= s;
  d3 *= s;
  d11 *= s;
  d22 *= s;
  d33 *= s;
  return *this;
}

DerivativeBundle operator+(DerivativeBundle a, const DerivativeBundle& b) { return a += b; }
DerivativeBundle operator-(DerivativeBundle a, const DerivativeBundle& b) { return a -= b; }
DerivativeBundle operator*(double s, DerivativeBundle a) { return a *= s; }

double adjoint_residual(const ProblemParams& params, const DerivativeBundle& b) {
  return -params.eps() * b.laplacian() + 2.0 * params.alpha() * b.d1 + params.beta() * b.g;
}

double g3_exponent(const ProblemParams& params, const ScaledFrame& frame) {
  return -params.alpha() * frame.r_minus_xi1;
}

double g3(const ProblemParams& params, const ScaledFrame& frame) {
  require_dim(params, 3, "g3");
  require_off_pole(frame);
  const double eps = params.eps();
  return kInv4Pi / (eps * eps) * std::exp(g3_exponent(params, frame)) / frame.r_hat;
}

DerivativeBundle g3_derivs(const ProblemParams& params, const ScaledFrame& frame) {
  require_dim(params, 3, "g3_derivs");
  require_off_pole(frame);
  const double a = params.alpha();
  const double r = frame.r_hat;
  const double x1 = frame.xi_hat[0];
  const double rmx = frame.r_minus_xi1;
  const double r2 = r * r;

  DerivativeBundle b;
  b.g = 1.0 / r;
  b.d1 = (a * rmx - x1 / r) / r2;
  b.d11 = (a * a * rmx * rmx - a * rmx * (1.0 + 3.0 * x1 / r) + (3.0 * x1 * x1 - r2) / r2) /
          (r2 * r);
  for (int k = 1; k < 3; ++k) {
    const double xk = frame.xi_hat[k];
    b.grad_ref(k) = -(a * r + 1.0) * xk / (r2 * r);
    b.hess_ref(k) = (a * a * xk * xk + (a * r + 1.0) * (3.0 * xk * xk - r2) / r2) / (r2 * r);
  }
  return finish_3d(params, b, g3_exponent(params, frame));
}

double g_crd(const ProblemParams& params, const ScaledFrame& frame) {
  require_dim(params, 3, "g_crd");
  require_off_pole(frame);
  const double eps = params.eps();
  return kInv4Pi / (eps * eps) * std::exp(crd_exponent(params, frame)) / frame.r_hat;
}

DerivativeBundle g_crd_derivs(const ProblemParams& params, const ScaledFrame& frame) {
  require_dim(params, 3, "g_crd_derivs");
  require_off_pole(frame);
  return finish_3d(params, crd_bracket(params, frame), crd_exponent(params, frame));
}

double g_nd(const ProblemParams& params, const ScaledFrame& frame) {
  require_off_pole(frame);
  const int n = params.dim();
  const double c = params.gamma();
  const double r = frame.r_hat;
  const auto order = special::BesselOrder::from_twice(n - 2);
  // (2 pi)^{-n/2} eps^{1-n} (c/r)^{n/2-1} e^{alpha xi1 - c r} [e^{c r} K_{n/2-1}(c r)]
  const double log_prefactor = -0.5 * n * std::log(2.0 * std::numbers::pi) -
                               (n - 1) * std::log(params.eps()) +
                               (0.5 * n - 1.0) * std::log(c / r);
  return std::exp(log_prefactor + crd_exponent(params, frame)) *
         special::bessel_k_scaled(order, c * r);
}

DerivativeBundle g2d_derivs(const ProblemParams& params, const ScaledFrame& frame) {
  require_dim(params, 2, "g2d_derivs");
  require_off_pole(frame);
  return g2d_bundle(params, frame, 0.0);
}

DerivativeBundle weighted_kernel_derivs(const ProblemParams& params, const ScaledFrame& frame,
                                        double log_weight) {
  require_off_pole(frame);
  if (params.dim() == 2) {
    return g2d_bundle(params, frame, log_weight);
  }
  require_dim(params, 3, "weighted_kernel_derivs");
  const double exponent = crd_exponent(params, frame) + log_weight;
  if (exponent < kUnderflowExponent) {
    return {};
  }
  return finish_3d(params, crd_bracket(params, frame), exponent);
}

double weighted_kernel_value(const ProblemParams& params, const ScaledFrame& frame,
                             double log_weight) {
  require_off_pole(frame);
  const double exponent = crd_exponent(params, frame) + log_weight;
  if (exponent < kUnderflowExponent) {
    return 0.0;
  }
  const double eps = params.eps();
  if (params.dim() == 2) {
    const double k0 =
        special::bessel_k_scaled(special::BesselOrder::from_twice(0), params.gamma() * frame.r_hat);
    return kInv2Pi / eps * std::exp(exponent) * k0;
  }
  require_dim(params, 3, "weighted_kernel_value");
  return kInv4Pi / (eps * eps) * std::exp(exponent) / frame.r_hat;
}

}  // namespace layergreen
