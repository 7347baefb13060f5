#pragma once

// Scaling-law sweeps: norms of the image approximation over an eps (and rho)
// grid, divided by the shape function of each bound and reduced to a band
// [c_min, c_max].  A law holds numerically when the band stays narrow.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "layergreen/images.hpp"
#include "layergreen/quadrature.hpp"

namespace layergreen::sweep {

enum class Quantity { d1, d2, d3, d11, d22, d33, value_plus_grad };
enum class Side { upper, lower, both };
enum class RegionRule { full, intersect_ball, minus_ball };
enum class RhoKind { none, eps_multiple, absolute, sweep };

struct RhoRule {
  RhoKind kind = RhoKind::none;
  /// eps_multiple: rho = value * eps.  absolute: rho = value.
  double value = 0.0;
  /// sweep: rho = m * eps for each multiple, plus the absolute radii, capped at 1/8.
  std::vector<double> multiples;
  std::vector<double> absolutes;
};

using ShapeFn = std::function<double(double eps, double rho)>;

struct BoundSpec {
  std::string name;
  Quantity quantity = Quantity::d1;
  RegionRule region = RegionRule::full;
  ShapeFn shape;
  std::string shape_label;
  Side side = Side::lower;
  RhoRule rho_rule;
  /// Acceptance threshold on the band spread (lower/both) or growth (upper).
  double threshold = 2.0;
};

/// The eleven laws: five upper bounds and six lower bounds.
const std::vector<BoundSpec>& builtin_catalog();
/// Throws SweepError with the list of names when not found.
const BoundSpec& find_spec(const std::string& name);

const char* to_string(Quantity q);
const char* to_string(Side s);

/// Radii used for one eps, in increasing order (empty for RhoKind::none).
std::vector<double> rho_values(const RhoRule& rule, double eps);

/// Integration region of a spec for one (eps, rho).
quadrature::Region make_region(const BoundSpec& spec, std::span<const double> x, images::Domain domain,
                               double rho);

struct SweepRow {
  double eps = 0.0;
  double rho = 0.0;
  double value = 0.0;
  double error_estimate = 0.0;
  double ratio = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
  bool tainted = false;
};

struct Band {
  double c_min = 0.0;
  double c_max = 0.0;
  double spread = 1.0;
  /// Least-squares slope of log(value) against log(shape).
  double slope = 1.0;
  /// Largest ratio increase r_j / r_i over row pairs with eps_j <= eps_i and
  /// rho_j >= rho_i.
  double growth = 1.0;
  std::size_t valid_rows = 0;
};

/// Band over the untainted rows.  Throws SweepError with fewer than two.
Band fit_band(std::span<const SweepRow> rows);

/// Least-squares slope of log(y) against log(x).  Needs two distinct x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct SweepReport {
  std::string spec;
  Side side = Side::lower;
  std::string shape_label;
  std::vector<SweepRow> rows;
  Band band;
  double threshold = 2.0;
  bool pass = false;
  std::vector<std::string> notes;
  double seconds = 0.0;  // wall time, not serialized
};

/// Computes the norm of the spec's quantity; replaceable for testing.
using NormProvider = std::function<quadrature::NormEstimate(
    const BoundSpec& spec, const ProblemParams& params, const quadrature::Region& region,
    std::span<const double> x, images::Domain domain, const quadrature::QuadratureOptions& options)>;

/// Default provider: image approximation + adaptive quadrature.
quadrature::NormEstimate approximation_norm(const BoundSpec& spec, const ProblemParams& params,
                                            const quadrature::Region& region, std::span<const double> x,
                                            images::Domain domain,
                                            const quadrature::QuadratureOptions& options);

struct SweepConfig {
  std::vector<double> eps_list;
  std::vector<double> x{0.5, 0.5, 0.5};
  images::Domain domain = images::Domain::cube;
  double alpha = 1.0;
  quadrature::QuadratureOptions quadrature{1e-3};
  /// Explicit radii; replaces the spec's rho rule when set.
  std::optional<std::vector<double>> rho_override;
  NormProvider provider;
};

/// Rows in canonical order: eps decreasing, rho increasing.
/// pre: eps in (0, 1/16], x in [1/4, 3/4]^n.
SweepReport run_sweep(const BoundSpec& spec, const SweepConfig& config);

}  // namespace layergreen::sweep
