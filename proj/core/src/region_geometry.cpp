#include "region_geometry.hpp"


#include "layergreen/error.hpp"

namespace layergreen::quadrature::geometry {

namespace {

std::array<int, 2> other_axes(int dim, int axis) {
  if (dim == 2) return {1 - axis, -1};
  if (axis == 0) return {1, 2};
  if (axis == 1) return {0, 2};
  return {0, 1};
}

}  // namespace

ScaledBox scaled_domain(const Region& region, const ProblemParams& params) {
  if (region.dim != params.dim()) throw DomainError("region and problem dimensions differ");
  if (region.dim != 2 && region.dim != 3) throw DomainError("integration needs dimension 2 or 3");
  const double eps = params.eps();
  ScaledBox box;
  box.dim = region.dim;
  const int n_bounded = region.base == BaseDomain::unit_cube ? region.dim : 1;
  for (int k = 0; k < n_bounded; ++k) {
    const double c = region.center[static_cast<std::size_t>(k)];
    if (!(c > 0.0 && c < 1.0)) throw DomainError("region center must lie inside the domain");
    box.lo[static_cast<std::size_t>(k)] = -c / eps;
    box.hi[static_cast<std::size_t>(k)] = (1.0 - c) / eps;
  }
  if (region.base == BaseDomain::slab) {
    const double t = slab_truncation(params, region.center[0]);
    for (int k = 1; k < region.dim; ++k) {
      box.lo[static_cast<std::size_t>(k)] = -t;
      box.hi[static_cast<std::size_t>(k)] = t;
    }
  }

  const double dist = box.inner_distance();
  switch (region.modifier) {
    case Modifier::none:
      break;
    case Modifier::intersect_ball:
    case Modifier::minus_ball:
      if (!(region.rho > 0.0 && region.rho <= 0.125)) throw DomainError("ball radius must be in (0, 1/8]");
      if (region.rho / eps >= dist) throw DomainError("ball must lie inside the domain");
      break;
    case Modifier::proof_subdomain:
      if (region.dim != 3) throw DomainError("proof subdomains are three-dimensional");
      if (region.tag == ProofTag::omega1_cone && dist < 1.0) {
        throw DomainError("unit scaled ball must lie inside the domain");
      }
      if (region.tag == ProofTag::omega3_cone2) {
        if (!(region.rho > 0.0 && region.rho <= 0.125)) throw DomainError("ball radius must be in (0, 1/8]");
        if (region.rho / eps >= dist) throw DomainError("ball must lie inside the domain");
      }
      if (region.tag == ProofTag::omega2_wake) {
        const double top = std::min(0.25 / eps, box.hi[0]);
        if (top <= 1.0) throw DomainError("wake subdomain is empty");
        for (int k = 1; k < 3; ++k) {
          if (top > std::min(-box.lo[static_cast<std::size_t>(k)], box.hi[static_cast<std::size_t>(k)])) {
            throw DomainError("wake subdomain leaves the domain");
          }
        }
      }
      break;
  }
  return box;
}

double Pyramid::map(const double* param, double* xi_hat) const {
  const auto others = other_axes(dim, axis);
  const double u = param[1];
  const double v = dim == 3 ? param[2] : 0.0;
  const double q = std::sqrt(1.0 + u * u + v * v);
  double t = 0.0;
  double dt = 1.0;
  switch (radial_mode) {
    case 0:
      t = param[0];
      break;
    case 1: {
      const double log_t0 = std::log(rho_hat / (h * q));
      t = std::exp((1.0 - param[0]) * log_t0);
      dt = -t * log_t0;
      break;
    }
    default: {
      const double t0 = rho_hat / (h * q);
      t = param[0] * t0;
      dt = t0;
      break;
    }
  }
  const double th = t * h;
  xi_hat[axis] = sign * th;
  xi_hat[others[0]] = th * u;
  if (dim == 3) {
    xi_hat[others[1]] = th * v;
    return th * th * h * dt;
  }
  return th * h * dt;
}

double Spherical::map(const double* param, double* xi_hat) const {
  const double r = param[0];
  const double theta = param[1];
  const auto others = other_axes(dim, polar_axis);
  if (dim == 2) {
    xi_hat[polar_axis] = r * std::cos(theta);
    xi_hat[others[0]] = r * std::sin(theta);
    return r;
  }
  const double st = std::sin(theta);
  xi_hat[polar_axis] = r * std::cos(theta);
  xi_hat[others[0]] = r * st * std::cos(param[2]);
  xi_hat[others[1]] = r * st * std::sin(param[2]);
  return r * r * st;
}

double Wake::map(const double* param, double* xi_hat) const {
  const double x1 = param[0];
  const double sigma = param[1];
  // |xi_hat_perp| = sqrt(2 x1) |psi| = sigma * x1
  const double s = sigma * x1;
  xi_hat[0] = x1;
  xi_hat[1] = s * std::cos(param[2]);
  xi_hat[2] = s * std::sin(param[2]);
  return sigma * x1 * x1;
}

}  // namespace layergreen::quadrature::geometry
