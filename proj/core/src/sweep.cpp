#include "layergreen/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "layergreen/error.hpp"

namespace layergreen::sweep {

namespace {

double abs_log(double eps) { return std::abs(std::log(eps)); }
double log_ratio(double eps, double rho) { return std::log(2.0 + eps / rho); }

RhoRule ball_sweep() {
  RhoRule r;
  r.kind = RhoKind::sweep;
  r.multiples = {0.25, 0.5, 1.0, 2.0, 8.0, 32.0};
  r.absolutes = {0.125};
  return r;
}

RhoRule eps_multiple(double m) {
  RhoRule r;
  r.kind = RhoKind::eps_multiple;
  r.value = m;
  return r;
}

std::vector<BoundSpec> make_catalog() {
  const ShapeFn log_upper = [](double eps, double) { return 1.0 + abs_log(eps); };
  const ShapeFn log_lower = [](double eps, double) { return abs_log(eps); };
  const ShapeFn inv_sqrt = [](double eps, double) { return 1.0 / std::sqrt(eps); };
  const ShapeFn linear = [](double eps, double rho) { return rho / eps; };
  const ShapeFn crossover = [](double eps, double rho) {
    return rho <= 2.0 * eps ? rho / eps : std::sqrt(rho / eps);
  };
  const ShapeFn second_1 = [](double eps, double rho) { return log_ratio(eps, rho) / eps; };
  const ShapeFn second_k = [](double eps, double rho) {
    return (log_ratio(eps, rho) + abs_log(eps)) / eps;
  };
  const RhoRule none;
  const RhoRule small = eps_multiple(1.0 / 16.0);

  std::vector<BoundSpec> c;
  c.push_back({"d1_log", Quantity::d1, RegionRule::full, log_upper, "1+|ln eps|", Side::upper, none, 2.0});
  c.push_back({"d2_sqrt", Quantity::d2, RegionRule::full, inv_sqrt, "eps^-1/2", Side::upper, none, 2.0});
  c.push_back({"ball_w11", Quantity::value_plus_grad, RegionRule::intersect_ball, linear, "rho/eps",
               Side::upper, ball_sweep(), 2.5});
  c.push_back({"d11_log", Quantity::d11, RegionRule::minus_ball, second_1, "eps^-1 ln(2+eps/rho)",
               Side::upper, small, 2.0});
  c.push_back({"d22_log", Quantity::d22, RegionRule::minus_ball, second_k,
               "eps^-1 (ln(2+eps/rho)+|ln eps|)", Side::upper, small, 2.0});
  c.push_back({"lower_d1_log", Quantity::d1, RegionRule::full, log_lower, "|ln eps|", Side::lower, none, 2.0});
  c.push_back({"lower_d2_sqrt", Quantity::d2, RegionRule::full, inv_sqrt, "eps^-1/2", Side::lower, none, 2.0});
  c.push_back({"lower_d3_sqrt", Quantity::d3, RegionRule::full, inv_sqrt, "eps^-1/2", Side::lower, none, 2.0});
  c.push_back({"lower_ball_w11", Quantity::value_plus_grad, RegionRule::intersect_ball, crossover,
               "rho/eps if rho<=2eps else (rho/eps)^1/2", Side::lower, ball_sweep(), 2.5});
  c.push_back({"lower_d11_log", Quantity::d11, RegionRule::minus_ball, second_1, "eps^-1 ln(2+eps/rho)",
               Side::lower, small, 2.0});
  c.push_back({"lower_d22_log", Quantity::d22, RegionRule::minus_ball, second_k,
               "eps^-1 (ln(2+eps/rho)+|ln eps|)", Side::lower, small, 2.0});
  return c;
}

double component(const DerivativeBundle& b, Quantity q) {
  switch (q) {
    case Quantity::d1: return b.d1;
    case Quantity::d2: return b.d2;
    case Quantity::d3: return b.d3;
    case Quantity::d11: return b.d11;
    case Quantity::d22: return b.d22;
    case Quantity::d33: return b.d33;
    case Quantity::value_plus_grad: break;
  }
  return b.g;
}

bool dominates(const SweepRow& later, const SweepRow& earlier) {
  return later.eps <= earlier.eps && later.rho >= earlier.rho;
}

}  // namespace

const std::vector<BoundSpec>& builtin_catalog() {
  static const std::vector<BoundSpec> catalog = make_catalog();
  return catalog;
}

const BoundSpec& find_spec(const std::string& name) {
  for (const auto& s : builtin_catalog()) {
    if (s.name == name) return s;
  }
  std::string names;
  for (const auto& s : builtin_catalog()) names += (names.empty() ? "" : ", ") + s.name;
  throw SweepError("unknown spec '" + name + "'; catalog: " + names);
}

const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::d1: return "d1";
    case Quantity::d2: return "d2";
    case Quantity::d3: return "d3";
    case Quantity::d11: return "d11";
    case Quantity::d22: return "d22";
    case Quantity::d33: return "d33";
    case Quantity::value_plus_grad: return "value_plus_grad";
  }
  return "?";
}

const char* to_string(Side s) {
  switch (s) {
    case Side::upper: return "upper";
    case Side::lower: return "lower";
    case Side::both: return "both";
  }
  return "?";
}

std::vector<double> rho_values(const RhoRule& rule, double eps) {
  std::vector<double> out;
  switch (rule.kind) {
    case RhoKind::none:
      return out;
    case RhoKind::eps_multiple:
      out.push_back(rule.value * eps);
      break;
    case RhoKind::absolute:
      out.push_back(rule.value);
      break;
    case RhoKind::sweep:
      for (double m : rule.multiples) out.push_back(m * eps);
      for (double a : rule.absolutes) out.push_back(a);
      break;
  }
  for (double& r : out) r = std::min(r, 0.125);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }),
            out.end());
  return out;
}

quadrature::Region make_region(const BoundSpec& spec, std::span<const double> x, images::Domain domain,
                               double rho) {
  auto base = domain == images::Domain::cube ? quadrature::Region::unit_cube(x) : quadrature::Region::slab(x);
  switch (spec.region) {
    case RegionRule::full: return base;
    case RegionRule::intersect_ball: return base.intersect_ball(rho);
    case RegionRule::minus_ball: return base.minus_ball(rho);
  }
  return base;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw SweepError("slope fit needs at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (!(sxx > 0.0)) throw SweepError("slope fit needs distinct abscissae");
  return sxy / sxx;
}

Band fit_band(std::span<const SweepRow> rows) {
  std::vector<const SweepRow*> valid;
  for (const auto& r : rows) {
    if (!r.tainted) valid.push_back(&r);
  }
  if (valid.size() < 2) throw SweepError("band fit needs at least two valid rows");
  Band b;
  b.valid_rows = valid.size();
  b.c_min = valid.front()->ratio;
  b.c_max = valid.front()->ratio;
  std::vector<double> shapes;
  std::vector<double> values;
  for (const auto* r : valid) {
    b.c_min = std::min(b.c_min, r->ratio);
    b.c_max = std::max(b.c_max, r->ratio);
    shapes.push_back(r->value / r->ratio);
    values.push_back(r->value);
  }
  b.spread = b.c_max / b.c_min;
  try {
    b.slope = loglog_slope(shapes, values);
  } catch (const SweepError&) {
    b.slope = 0.0;
  }
  b.growth = 1.0;
  for (std::size_t i = 0; i < valid.size(); ++i) {
    for (std::size_t j = i + 1; j < valid.size(); ++j) {
      if (dominates(*valid[j], *valid[i])) b.growth = std::max(b.growth, valid[j]->ratio / valid[i]->ratio);
    }
  }
  return b;
}

quadrature::NormEstimate approximation_norm(const BoundSpec& spec, const ProblemParams& params,
                                            const quadrature::Region& region, std::span<const double> x,
                                            images::Domain domain,
                                            const quadrature::QuadratureOptions& options) {
  if (spec.quantity == Quantity::d3 || spec.quantity == Quantity::d33) {
    if (params.dim() != 3) throw DomainError("quantity needs dimension 3");
  }
  const images::Approximation approx(params, x, domain);
  if (spec.quantity == Quantity::value_plus_grad) {
    const quadrature::BundleField f = [&](const quadrature::SamplePoint& p) {
      return approx.jet_offset(p.scaled()).bundle;
    };
    return quadrature::w11_norm(f, region, params, options);
  }
  const Quantity q = spec.quantity;
  const quadrature::ScalarField f = [&](const quadrature::SamplePoint& p) {
    return component(approx.jet_offset(p.scaled()).bundle, q);
  };
  return quadrature::l1_norm(f, region, params, options);
}

SweepReport run_sweep(const BoundSpec& spec, const SweepConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.eps_list.empty()) throw SweepError("empty eps list");
  if (config.x.size() < 2 || config.x.size() > 3) throw DomainError("x must have 2 or 3 coordinates");
  if (!images::in_validated_region(config.x)) throw DomainError("x must lie in [1/4, 3/4]^n");
  std::vector<double> eps_list = config.eps_list;
  for (double e : eps_list) {
    if (!(e > 0.0 && e <= 0.0625)) throw DomainError("sweep eps must lie in (0, 1/16]");
  }
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
  eps_list.erase(std::unique(eps_list.begin(), eps_list.end()), eps_list.end());

  const NormProvider provider = config.provider ? config.provider : NormProvider(approximation_norm);
  const int dim = static_cast<int>(config.x.size());

  SweepReport report;
  report.spec = spec.name;
  report.side = spec.side;
  report.shape_label = spec.shape_label;
  report.threshold = spec.threshold;

  for (double eps : eps_list) {
    std::vector<double> radii;
    if (spec.region == RegionRule::full) {
      radii = {0.0};
    } else if (config.rho_override) {
      radii = *config.rho_override;
      std::sort(radii.begin(), radii.end());
    } else {
      radii = rho_values(spec.rho_rule, eps);
    }
    const auto params = ProblemParams::make(eps, config.alpha, 0.0, dim);
    for (double rho : radii) {
      const auto region = make_region(spec, config.x, config.domain, rho);
      const auto est = provider(spec, params, region, config.x, config.domain, config.quadrature);
      SweepRow row;
      row.eps = eps;
      row.rho = rho;
      row.value = est.value;
      row.error_estimate = est.error_estimate;
      row.evaluations = est.evaluations;
      row.converged = est.converged;
      const double shape = spec.shape(eps, rho);
      row.ratio = est.value / shape;
      if (!est.converged) {
        row.tainted = true;
        report.notes.push_back("quadrature did not converge at eps=" + std::to_string(eps) +
                               " rho=" + std::to_string(rho) + "; row excluded");
      } else if (!(row.ratio > 0.0) || !std::isfinite(row.ratio)) {
        row.tainted = true;
        report.notes.push_back("non-positive ratio at eps=" + std::to_string(eps) + "; row excluded");
      }
      report.rows.push_back(row);
    }
  }

  report.band = fit_band(report.rows);
  const bool all_converged =
      std::all_of(report.rows.begin(), report.rows.end(), [](const SweepRow& r) { return !r.tainted; });
  const double measure = spec.side == Side::upper ? report.band.growth : report.band.spread;
  report.pass = all_converged && measure <= spec.threshold;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace layergreen::sweep
