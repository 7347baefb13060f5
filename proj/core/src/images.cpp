#include "layergreen/images.hpp"

#include <cmath>
#include <string>

#include "layergreen/error.hpp"

namespace layergreen::images {

namespace {

constexpr double kCutoffLow = 1.0 / 6.0;
constexpr double kCutoffWidth = 1.0 / 6.0;

using Point = std::array<double, 3>;

Point to_point(std::span<const double> v, int dim) {
  if (static_cast<int>(v.size()) != dim) {
    throw DomainError("point dimension " + std::to_string(v.size()) + " does not match dim " +
                      std::to_string(dim));
  }
  Point p{};
  for (int k = 0; k < dim; ++k) {
    p[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(k)];
  }
  return p;
}

// omega_c(xi) times F(xi) along `axis`: product rule on the bundle and the
// commutator contribution to phi.
Jet times_cutoff(const CutoffValue& w, const Jet& inner, int axis, const ProblemParams& params) {
  Jet out;
  out.bundle = w.omega * inner.bundle;
  const double f = inner.bundle.g;
  const double fk = inner.bundle.grad(axis);
  out.bundle.grad_ref(axis) += w.omega_prime * f;
  out.bundle.hess_ref(axis) += w.omega_double_prime * f + 2.0 * w.omega_prime * fk;
  out.phi = w.omega * inner.phi - params.eps() * (w.omega_double_prime * f + 2.0 * w.omega_prime * fk);
  if (axis == 0) {
    out.phi += 2.0 * params.alpha() * w.omega_prime * f;
  }
  return out;
}

bool vanishes(const CutoffValue& w) {
  return w.omega == 0.0 && w.omega_prime == 0.0 && w.omega_double_prime == 0.0;
}

void check_unit_interval(double t, const char* what) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(t));
  }
}

}  // namespace

CutoffValue cutoff_eval(double t) {
  check_unit_interval(t, "cut-off argument");
  double s = (t - kCutoffLow) / kCutoffWidth;
  if (s <= 0.0) {
    return {};
  }
  if (s >= 1.0) {
    return {1.0, 0.0, 0.0};
  }
  const double s2 = s * s;
  const double q = 1.0 - s;
  CutoffValue w;
  w.omega = s2 * s * (10.0 - 15.0 * s + 6.0 * s2);
  w.omega_prime = 180.0 * s2 * q * q;
  w.omega_double_prime = 2160.0 * s * q * (1.0 - 2.0 * s);
  return w;
}

CutoffValue cutoff_reflected(double t) {
  check_unit_interval(t, "cut-off argument");
  CutoffValue w = cutoff_eval(1.0 - t);
  w.omega_prime = -w.omega_prime;
  return w;
}

ImageWeights ImageWeights::make(const ProblemParams& params, double x1) {
  const double scale = 2.0 * params.alpha() / params.eps();
  ImageWeights w;
  w.lambda_minus_log = scale * (1.0 - x1);
  w.lambda_plus_log = scale * (1.0 + x1);
  w.p_log = -scale * x1;
  return w;
}

bool in_validated_region(std::span<const double> x) {
  for (double v : x) {
    if (!(v >= 0.25 && v <= 0.75)) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Flattened expansion

ImageExpansion ImageExpansion::build(const ProblemParams& params, std::span<const double> x,
                                     Domain domain) {
  const int dim = params.dim();
  const Point p = to_point(x, dim);
  const ImageWeights w = ImageWeights::make(params, p[0]);
  ImageExpansion e;
  e.terms = {
      ImageTerm{+1, 0.0, p[0], false, {}},
      ImageTerm{-1, w.p_log, -p[0], false, {}},
      ImageTerm{-1, w.lambda_minus_log, 2.0 - p[0], true, {}},
      ImageTerm{+1, w.p_log + w.lambda_plus_log, 2.0 + p[0], true, {}},
  };
  if (domain == Domain::slab) {
    return e;
  }
  for (int axis = 1; axis < dim; ++axis) {
    std::vector<ImageTerm> layered;
    layered.reserve(e.terms.size() * 3);
    for (const double center : {-1.0, 0.0, 2.0}) {
      for (const ImageTerm& t : e.terms) {
        ImageTerm copy = t;
        if (center >= 0.0) {
          copy.sign = -copy.sign;
          copy.reflections.push_back({axis, center});
        }
        layered.push_back(std::move(copy));
      }
    }
    e.terms = std::move(layered);
  }
  return e;
}

double ImageExpansion::combined_exponent(const ProblemParams& params, const ImageTerm& term,
                                         std::span<const double> x, std::span<const double> xi) {
  const int dim = params.dim();
  Point q = to_point(xi, dim);
  for (const TransverseReflection& r : term.reflections) {
    q[static_cast<std::size_t>(r.axis)] = r.center - q[static_cast<std::size_t>(r.axis)];
  }
  const ScaledFrame f = make_frame(x, std::span<const double>(q.data(), static_cast<std::size_t>(dim)),
                                   params, term.pole_shift);
  return term.weight_log - params.alpha() * f.r_minus_xi1 - params.gamma_excess() * f.r_hat;
}

double ImageExpansion::evaluate(const ProblemParams& params, std::span<const double> x,
                                std::span<const double> xi) const {
  const int dim = params.dim();
  const Point p = to_point(xi, dim);
  const auto n = static_cast<std::size_t>(dim);
  double sum = 0.0;
  for (const ImageTerm& t : terms) {
    double factor = t.sign;
    if (t.xi1_cutoff) {
      factor *= cutoff_eval(p[0]).omega;
    }
    Point q = p;
    for (const TransverseReflection& r : t.reflections) {
      const auto a = static_cast<std::size_t>(r.axis);
      factor *= r.center == 0.0 ? cutoff_reflected(p[a]).omega : cutoff_eval(p[a]).omega;
      q[a] = r.center - q[a];
    }
    if (factor == 0.0) {
      continue;
    }
    const ScaledFrame f = make_frame(x, std::span<const double>(q.data(), n), params, t.pole_shift);
    sum += factor * weighted_kernel_value(params, f, t.weight_log);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Nested evaluator

Approximation::Approximation(const ProblemParams& params, std::span<const double> x, Domain domain)
    : params_(params), x_(to_point(x, params.dim())), domain_(domain) {
  const int dim = params.dim();
  if (dim > 3) {
    throw DomainError("image approximations support dim 2 and 3");
  }
  if (params.beta() != 0.0 && dim != 3) {
    throw DomainError("reaction term is supported for dim = 3 only");
  }
  if (domain == Domain::slab) {
    if (!(x_[0] > 0.0 && x_[0] < 1.0)) {
      throw DomainError("slab approximation requires x_1 in (0, 1)");
    }
  } else {
    for (int k = 0; k < dim; ++k) {
      const double v = x_[static_cast<std::size_t>(k)];
      if (!(v >= 0.125 && v <= 0.875)) {
        throw DomainError("cube approximation requires x in [1/8, 7/8]^n, got component " +
                          std::to_string(v));
      }
    }
  }
  weights_ = ImageWeights::make(params, x_[0]);
}

Jet Approximation::slab_jet(const Point& xi, const double* primary_offset) const {
  const auto n = static_cast<std::size_t>(params_.dim());
  const std::span<const double> xs(x_.data(), n);
  const std::span<const double> q(xi.data(), n);
  auto term = [&](double shift, double log_weight) {
    return weighted_kernel_derivs(params_, make_frame(xs, q, params_, shift), log_weight);
  };

  Jet out;
  const ScaledFrame primary = primary_offset != nullptr
                                  ? frame_from_offset(std::span<const double>(primary_offset, n))
                                  : make_frame(xs, q, params_, x_[0]);
  out.bundle = weighted_kernel_derivs(params_, primary, 0.0) - term(-x_[0], weights_.p_log);

  const CutoffValue w = cutoff_eval(xi[0]);
  if (vanishes(w)) {
    return out;
  }
  Jet outflow;
  outflow.bundle = term(2.0 - x_[0], weights_.lambda_minus_log) -
                   term(2.0 + x_[0], weights_.p_log + weights_.lambda_plus_log);
  const Jet cut = times_cutoff(w, outflow, 0, params_);
  out.bundle -= cut.bundle;
  out.phi -= cut.phi;
  return out;
}

Jet Approximation::layered_jet(int layer, const Point& xi, const double* primary_offset) const {
  if (layer == 0) {
    return slab_jet(xi, primary_offset);
  }
  const int axis = layer;
  const auto a = static_cast<std::size_t>(axis);
  Jet out = layered_jet(layer - 1, xi, primary_offset);
  for (const double center : {0.0, 2.0}) {
    const CutoffValue w = center == 0.0 ? cutoff_reflected(xi[a]) : cutoff_eval(xi[a]);
    if (vanishes(w)) {
      continue;
    }
    Point mirrored = xi;
    mirrored[a] = center - xi[a];
    Jet inner = layered_jet(layer - 1, mirrored, nullptr);
    inner.bundle.grad_ref(axis) = -inner.bundle.grad(axis);
    const Jet cut = times_cutoff(w, inner, axis, params_);
    out.bundle -= cut.bundle;
    out.phi -= cut.phi;
  }
  return out;
}

Jet Approximation::evaluate(const Point& xi, const double* primary_offset) const {
  const int dim = params_.dim();
  for (int k = 0; k < (domain_ == Domain::slab ? 1 : dim); ++k) {
    const double v = xi[static_cast<std::size_t>(k)];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("evaluation point outside the domain (component " + std::to_string(k) +
                        " = " + std::to_string(v) + ")");
    }
  }
  return layered_jet(domain_ == Domain::slab ? 0 : dim - 1, xi, primary_offset);
}

Jet Approximation::jet(std::span<const double> xi) const {
  return evaluate(to_point(xi, params_.dim()), nullptr);
}

Jet Approximation::jet_offset(std::span<const double> xi_hat) const {
  const int dim = params_.dim();
  const Point off = to_point(xi_hat, dim);
  Point xi{};
  for (int k = 0; k < dim; ++k) {
    const auto i = static_cast<std::size_t>(k);
    xi[i] = x_[i] + params_.eps() * off[i];
  }
  return evaluate(xi, off.data());
}

double Approximation::value(std::span<const double> xi) const { return jet(xi).bundle.g; }

double gbar_slab(const ProblemParams& params, std::span<const double> x, std::span<const double> xi) {
  return Approximation(params, x, Domain::slab).value(xi);
}

double gbar_cube(const ProblemParams& params, std::span<const double> x, std::span<const double> xi) {
  return Approximation(params, x, Domain::cube).value(xi);
}

DerivativeBundle gbar_derivs(const ProblemParams& params, std::span<const double> x,
                             std::span<const double> xi, Domain which) {
  return Approximation(params, x, which).derivs(xi);
}

double residual_phi(const ProblemParams& params, std::span<const double> x,
                    std::span<const double> xi, Domain which) {
  return Approximation(params, x, which).residual(xi);
}

}  // namespace layergreen::images
