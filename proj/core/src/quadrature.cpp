#include "layergreen/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include "layergreen/error.hpp"
#include "layergreen/parallel.hpp"
#include "region_geometry.hpp"

namespace layergreen::quadrature {

namespace {

using geometry::Pyramid;
using geometry::ScaledBox;
using geometry::Spherical;
using geometry::Wake;

using PointEval = std::function<void(const SamplePoint&, std::span<double>)>;

constexpr int kMaxDepth = 60;
constexpr std::size_t kBatch = 32;
constexpr double kPi = std::numbers::pi;

struct Patch {
  enum class Kind { box, pyramid, spherical, wake };
  Kind kind = Kind::box;
  Pyramid pyramid;
  Spherical spherical;
  Wake wake;

  double map(const double* param, double* xi_hat) const {
    switch (kind) {
      case Kind::box:
        for (int k = 0; k < 3; ++k) xi_hat[k] = param[k];
        return 1.0;
      case Kind::pyramid:
        return pyramid.map(param, xi_hat);
      case Kind::spherical:
        return spherical.map(param, xi_hat);
      case Kind::wake:
        return wake.map(param, xi_hat);
    }
    return 0.0;
  }
};

struct Cell {
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
  int patch = 0;
  int depth = 0;
  int split_axis = 0;
  bool leaf = true;
};

struct Layout {
  int dim = 3;
  std::vector<Patch> patches;
  std::vector<Cell> cells;
};

std::vector<double> merge_points(std::vector<double> pts, double lo, double hi) {
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  const double tol = 1e-9 * std::max(1.0, hi - lo);
  for (double p : pts) {
    if (p < lo || p > hi) continue;
    if (out.empty() || p - out.back() > tol) out.push_back(p);
  }
  if (out.front() - lo > tol) out.insert(out.begin(), lo);
  out.front() = lo;
  if (hi - out.back() > tol) out.push_back(hi);
  out.back() = hi;
  return out;
}

std::vector<double> geometric_points(double lo, double hi, double first) {
  std::vector<double> pts{lo};
  for (double p = first; p < hi; p *= 2.0) {
    if (p > lo) pts.push_back(p);
  }
  pts.push_back(hi);
  return merge_points(pts, lo, hi);
}

void add_cell(Layout& layout, int patch, std::array<double, 3> lo, std::array<double, 3> hi) {
  Cell c;
  c.lo = lo;
  c.hi = hi;
  c.patch = patch;
  layout.cells.push_back(c);
}

void add_tensor_cells(Layout& layout, int patch, const std::vector<std::vector<double>>& axes,
                      bool skip_center, double h) {
  const int dim = static_cast<int>(axes.size());
  std::array<std::size_t, 3> n{1, 1, 1};
  for (int k = 0; k < dim; ++k) n[static_cast<std::size_t>(k)] = axes[static_cast<std::size_t>(k)].size() - 1;
  for (std::size_t i = 0; i < n[0]; ++i) {
    for (std::size_t j = 0; j < n[1]; ++j) {
      for (std::size_t l = 0; l < n[2]; ++l) {
        const std::array<std::size_t, 3> idx{i, j, l};
        std::array<double, 3> lo{};
        std::array<double, 3> hi{};
        bool inside = true;
        for (int k = 0; k < dim; ++k) {
          const auto& a = axes[static_cast<std::size_t>(k)];
          const auto ik = idx[static_cast<std::size_t>(k)];
          lo[static_cast<std::size_t>(k)] = a[ik];
          hi[static_cast<std::size_t>(k)] = a[ik + 1];
          const double mid = 0.5 * (a[ik] + a[ik + 1]);
          if (std::abs(mid) >= h) inside = false;
        }
        if (skip_center && inside) continue;
        add_cell(layout, patch, lo, hi);
      }
    }
  }
}

void add_pyramids(Layout& layout, int dim, double h, double rho_hat, int radial_mode) {
  std::vector<double> radial;
  if (radial_mode == 0) {
    radial = {0.0};
    for (double t = 1.0 / 64.0; t < 1.0; t *= 2.0) radial.push_back(t);
    radial.push_back(1.0);
  } else {
    const int n = std::clamp(static_cast<int>(std::ceil(std::log2(h / rho_hat))), 2, 40);
    for (int i = 0; i <= n; ++i) radial.push_back(static_cast<double>(i) / n);
  }
  for (int axis = 0; axis < dim; ++axis) {
    for (double sign : {-1.0, 1.0}) {
      Patch p;
      p.kind = Patch::Kind::pyramid;
      p.pyramid = Pyramid{dim, axis, sign, h, rho_hat, radial_mode};
      layout.patches.push_back(p);
      const int id = static_cast<int>(layout.patches.size()) - 1;
      std::vector<std::vector<double>> axes{radial, {-1.0, 0.0, 1.0}};
      if (dim == 3) axes.push_back({-1.0, 0.0, 1.0});
      add_tensor_cells(layout, id, axes, false, 0.0);
    }
  }
}

void add_outer_boxes(Layout& layout, const Region& region, const ScaledBox& box,
                     const ProblemParams& params, double h) {
  Patch p;
  p.kind = Patch::Kind::box;
  layout.patches.push_back(p);
  const int id = static_cast<int>(layout.patches.size()) - 1;
  const double eps = params.eps();
  std::vector<std::vector<double>> axes;
  for (int k = 0; k < box.dim; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double lo = box.lo[ku];
    const double hi = box.hi[ku];
    std::vector<double> pts{lo, 0.0, hi};
    for (double s = h; s < std::max(-lo, hi); s *= 2.0) {
      pts.push_back(s);
      pts.push_back(-s);
    }
    std::vector<double> junctions;
    if (k == 0) {
      junctions = {1.0 / 6.0, 1.0 / 3.0};
      for (double s = 0.5; hi - s > h; s *= 2.0) pts.push_back(hi - s);
    } else if (region.base == BaseDomain::unit_cube) {
      junctions = {1.0 / 6.0, 1.0 / 3.0, 2.0 / 3.0, 5.0 / 6.0};
    }
    for (double t : junctions) {
      const double s = (t - region.center[ku]) / eps;
      if (std::abs(s) > h) pts.push_back(s);
    }
    axes.push_back(merge_points(pts, lo, hi));
  }
  add_tensor_cells(layout, id, axes, true, h);
}

void add_spherical(Layout& layout, int dim, int polar_axis, double r_max,
                   const std::vector<double>& theta) {
  Patch p;
  p.kind = Patch::Kind::spherical;
  p.spherical = Spherical{dim, polar_axis};
  layout.patches.push_back(p);
  const int id = static_cast<int>(layout.patches.size()) - 1;
  const auto radial = geometric_points(0.0, r_max, std::min(1.0, r_max));
  std::vector<std::vector<double>> axes{radial, theta};
  if (dim == 3) axes.push_back({0.0, 0.5 * kPi, kPi, 1.5 * kPi, 2.0 * kPi});
  add_tensor_cells(layout, id, axes, false, 0.0);
}

Layout build_layout(const Region& region, const ProblemParams& params) {
  const ScaledBox box = geometry::scaled_domain(region, params);
  Layout layout;
  layout.dim = box.dim;
  const double dist = box.inner_distance();
  const double rho_hat = region.rho / params.eps();
  switch (region.modifier) {
    case Modifier::none: {
      const double h = std::min(1.0, 0.9 * dist);
      add_pyramids(layout, box.dim, h, 0.0, 0);
      add_outer_boxes(layout, region, box, params, h);
      break;
    }
    case Modifier::minus_ball: {
      const double h = std::min(std::max(1.0, 2.0 * rho_hat), 0.9 * dist);
      if (h <= rho_hat) {
        // Ball nearly touches the boundary: a thin shell of pyramids remains.
        throw DomainError("ball must lie inside the domain with a margin");
      }
      add_pyramids(layout, box.dim, h, rho_hat, 1);
      add_outer_boxes(layout, region, box, params, h);
      break;
    }
    case Modifier::intersect_ball: {
      std::vector<double> theta{0.0, kPi / 8.0, kPi / 4.0, kPi / 2.0, kPi};
      if (box.dim == 2) theta = {0.0, kPi / 8.0, kPi / 4.0, kPi / 2.0, kPi, 1.5 * kPi, 2.0 * kPi - kPi / 4.0,
                                 2.0 * kPi - kPi / 8.0, 2.0 * kPi};
      add_spherical(layout, box.dim, 0, rho_hat, theta);
      break;
    }
    case Modifier::proof_subdomain:
      switch (region.tag) {
        case ProofTag::omega1_cone:
          add_spherical(layout, 3, 0, 1.0,
                        {0.0, kPi / 8.0, kPi / 4.0});
          add_spherical(layout, 3, 0, 1.0,
                        {0.75 * kPi, 0.875 * kPi, kPi});
          break;
        case ProofTag::omega3_cone2:
          add_spherical(layout, 3, 1, rho_hat, {0.0, kPi / 8.0, kPi / 4.0});
          add_spherical(layout, 3, 1, rho_hat, {0.75 * kPi, 0.875 * kPi, kPi});
          break;
        case ProofTag::omega2_wake: {
          Patch p;
          p.kind = Patch::Kind::wake;
          layout.patches.push_back(p);
          const int id = static_cast<int>(layout.patches.size()) - 1;
          const double top = std::min(0.25 / params.eps(), box.hi[0]);
          add_tensor_cells(layout, id,
                           {geometric_points(1.0, top, 2.0), {0.0, 0.5, 1.0},
                            {0.0, 0.5 * kPi, kPi, 1.5 * kPi, 2.0 * kPi}},
                           false, 0.0);
          break;
        }
      }
      break;
  }
  return layout;
}

// Embedded degree-7/5 rule of Genz and Malik on a d-dimensional box.
struct GenzMalik {
  int dim;
  double w[5];
  double we[4];
  static constexpr double lambda2 = 0.35856858280031809199;  // sqrt(9/70)
  static constexpr double lambda4 = 0.94868329805051379960;  // sqrt(9/10)
  static constexpr double lambda5 = 0.68824720161168529772;  // sqrt(9/19)

  explicit GenzMalik(int d) : dim(d) {
    const double dd = d;
    w[0] = (12824.0 - 9120.0 * dd + 400.0 * dd * dd) / 19683.0;
    w[1] = 980.0 / 6561.0;
    w[2] = (1820.0 - 400.0 * dd) / 19683.0;
    w[3] = 200.0 / 19683.0;
    w[4] = 6859.0 / 19683.0 / static_cast<double>(1 << d);
    we[0] = (729.0 - 950.0 * dd + 50.0 * dd * dd) / 729.0;
    we[1] = 245.0 / 486.0;
    we[2] = (265.0 - 100.0 * dd) / 1458.0;
    we[3] = 25.0 / 729.0;
  }

  [[nodiscard]] std::size_t points() const {
    const std::size_t d = static_cast<std::size_t>(dim);
    return 1 + 4 * d + 2 * d * (d - 1) + (std::size_t{1} << d);
  }
};

class Engine {
 public:
  Engine(const Region& region, const ProblemParams& params, const PointEval& eval, std::size_t ncomp,
         const QuadratureOptions& options)
      : region_(region),
        params_(params),
        eval_(eval),
        ncomp_(ncomp),
        options_(options),
        layout_(build_layout(region, params)),
        rule_(layout_.dim) {}

  std::vector<NormEstimate> run();

 private:
  void evaluate(std::size_t id, std::vector<double>& scratch);
  void evaluate_range(std::size_t first, std::size_t last);
  void totals(std::vector<double>& value, std::vector<double>& error) const;
  [[nodiscard]] double priority(std::size_t id) const;
  [[nodiscard]] bool done(const std::vector<double>& value, const std::vector<double>& error) const;

  const Region& region_;
  const ProblemParams& params_;
  const PointEval& eval_;
  std::size_t ncomp_;
  QuadratureOptions options_;
  Layout layout_;
  GenzMalik rule_;
  std::vector<double> values_;
  std::vector<double> errors_;
  std::vector<double> normalizer_;
  std::size_t evaluations_ = 0;
};

void Engine::evaluate(std::size_t id, std::vector<double>& scratch) {
  Cell& cell = layout_.cells[id];
  const Patch& patch = layout_.patches[static_cast<std::size_t>(cell.patch)];
  const int d = layout_.dim;
  const std::size_t nc = ncomp_;
  std::array<double, 3> c{};
  std::array<double, 3> hw{};
  double volume = 1.0;
  for (int k = 0; k < d; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    c[ku] = 0.5 * (cell.lo[ku] + cell.hi[ku]);
    hw[ku] = 0.5 * (cell.hi[ku] - cell.lo[ku]);
    volume *= 2.0 * hw[ku];
  }

  scratch.assign(nc * 7, 0.0);
  double* f0 = scratch.data();
  double* s2 = f0 + nc;
  double* s3 = s2 + nc;
  double* s4 = s3 + nc;
  double* s5 = s4 + nc;
  double* fa = s5 + nc;
  double* fb = fa + nc;
  std::vector<double> tmp(nc);
  std::vector<double> second2(nc);

  const double eps = params_.eps();
  auto sample = [&](const std::array<double, 3>& p, double* out) {
    SamplePoint sp;
    sp.dim = d;
    const double jac = patch.map(p.data(), sp.xi_hat.data());
    for (int k = 0; k < d; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      sp.xi[ku] = region_.center[ku] + eps * sp.xi_hat[ku];
    }
    eval_(sp, std::span<double>(tmp.data(), nc));
    for (std::size_t q = 0; q < nc; ++q) {
      const double v = tmp[q] * jac;
      if (!std::isfinite(v)) throw SingularityError("integrand is not finite at a quadrature node");
      out[q] = v;
    }
  };

  sample(c, f0);
  std::array<double, 3> diff{};
  for (int i = 0; i < d; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    auto p = c;
    double inner = 0.0;
    for (double lam : {GenzMalik::lambda2, GenzMalik::lambda4}) {
      p[iu] = c[iu] - lam * hw[iu];
      sample(p, fa);
      p[iu] = c[iu] + lam * hw[iu];
      sample(p, fb);
      double* acc = lam == GenzMalik::lambda2 ? s2 : s3;
      for (std::size_t q = 0; q < nc; ++q) {
        acc[q] += fa[q] + fb[q];
        const double second = fa[q] + fb[q] - 2.0 * f0[q];
        if (lam == GenzMalik::lambda2) {
          second2[q] = second;
        } else {
          inner += std::abs(second2[q] - second / 7.0) / normalizer_[q];
        }
      }
      p[iu] = c[iu];
    }
    diff[iu] = inner;
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      for (double si : {-1.0, 1.0}) {
        for (double sj : {-1.0, 1.0}) {
          auto p = c;
          p[static_cast<std::size_t>(i)] += si * GenzMalik::lambda4 * hw[static_cast<std::size_t>(i)];
          p[static_cast<std::size_t>(j)] += sj * GenzMalik::lambda4 * hw[static_cast<std::size_t>(j)];
          sample(p, fa);
          for (std::size_t q = 0; q < nc; ++q) s4[q] += fa[q];
        }
      }
    }
  }
  for (int mask = 0; mask < (1 << d); ++mask) {
    auto p = c;
    for (int k = 0; k < d; ++k) {
      const double s = (mask >> k) & 1 ? 1.0 : -1.0;
      p[static_cast<std::size_t>(k)] += s * GenzMalik::lambda5 * hw[static_cast<std::size_t>(k)];
    }
    sample(p, fa);
    for (std::size_t q = 0; q < nc; ++q) s5[q] += fa[q];
  }

  for (std::size_t q = 0; q < nc; ++q) {
    const double i7 = volume * (rule_.w[0] * f0[q] + rule_.w[1] * s2[q] + rule_.w[2] * s3[q] +
                                rule_.w[3] * s4[q] + rule_.w[4] * s5[q]);
    const double i5 =
        volume * (rule_.we[0] * f0[q] + rule_.we[1] * s2[q] + rule_.we[2] * s3[q] + rule_.we[3] * s4[q]);
    values_[id * nc + q] = i7;
    errors_[id * nc + q] = std::abs(i7 - i5);
  }

  double best = 0.0;
  for (int k = 0; k < d; ++k) best = std::max(best, diff[static_cast<std::size_t>(k)]);
  int axis = -1;
  for (int k = 0; k < d; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    if (diff[ku] < best * (1.0 - 1e-10)) continue;
    if (axis < 0 || hw[ku] > hw[static_cast<std::size_t>(axis)]) axis = k;
  }
  cell.split_axis = axis;
}

void Engine::evaluate_range(std::size_t first, std::size_t last) {
  values_.resize(layout_.cells.size() * ncomp_);
  errors_.resize(layout_.cells.size() * ncomp_);
  parallel_for(
      last - first,
      [&](std::size_t i) {
        thread_local std::vector<double> scratch;
        evaluate(first + i, scratch);
      },
      options_.threads);
  evaluations_ += (last - first) * rule_.points();
}

void Engine::totals(std::vector<double>& value, std::vector<double>& error) const {
  std::vector<CompensatedSum> v(ncomp_);
  std::vector<CompensatedSum> e(ncomp_);
  for (std::size_t id = 0; id < layout_.cells.size(); ++id) {
    if (!layout_.cells[id].leaf) continue;
    for (std::size_t q = 0; q < ncomp_; ++q) {
      v[q].add(values_[id * ncomp_ + q]);
      e[q].add(errors_[id * ncomp_ + q]);
    }
  }
  value.resize(ncomp_);
  error.resize(ncomp_);
  for (std::size_t q = 0; q < ncomp_; ++q) {
    value[q] = v[q].value();
    error[q] = e[q].value();
  }
}

double Engine::priority(std::size_t id) const {
  double p = 0.0;
  for (std::size_t q = 0; q < ncomp_; ++q) p += errors_[id * ncomp_ + q] / normalizer_[q];
  return p;
}

bool Engine::done(const std::vector<double>& value, const std::vector<double>& error) const {
  for (std::size_t q = 0; q < ncomp_; ++q) {
    if (error[q] > std::max(options_.rel_tol * std::abs(value[q]), options_.abs_tol)) return false;
  }
  return true;
}

std::vector<NormEstimate> Engine::run() {
  normalizer_.assign(ncomp_, 1.0);
  evaluate_range(0, layout_.cells.size());

  std::vector<double> value;
  std::vector<double> error;
  totals(value, error);
  for (std::size_t q = 0; q < ncomp_; ++q) {
    normalizer_[q] = std::max({std::abs(value[q]), options_.abs_tol, 1e-300});
  }

  using Entry = std::pair<double, std::size_t>;
  auto cmp = [](const Entry& a, const Entry& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  for (std::size_t id = 0; id < layout_.cells.size(); ++id) {
    const double p = priority(id);
    if (p > 0.0) heap.emplace(p, id);
  }

  // Running totals, refreshed from the leaves periodically.
  std::vector<double> run_value = value;
  std::vector<double> run_error = error;
  bool converged = false;
  std::size_t iteration = 0;
  while (true) {
    if (done(run_value, run_error)) {
      totals(value, error);
      run_value = value;
      run_error = error;
      if (done(value, error)) {
        converged = true;
        break;
      }
    }
    if (heap.empty()) {
      totals(value, error);
      converged = done(value, error);
      break;
    }
    const std::size_t per_split = 2 * rule_.points();
    if (evaluations_ + per_split > options_.max_evaluations) break;

    std::vector<std::size_t> parents;
    while (!heap.empty() && parents.size() < kBatch &&
           evaluations_ + per_split * (parents.size() + 1) <= options_.max_evaluations) {
      const std::size_t id = heap.top().second;
      heap.pop();
      const Cell& cell = layout_.cells[id];
      if (cell.depth >= kMaxDepth) {
        for (std::size_t q = 0; q < ncomp_; ++q) {
          const double target = std::max(options_.rel_tol * std::abs(run_value[q]), options_.abs_tol);
          if (errors_[id * ncomp_ + q] > 1e-3 * target) {
            throw SingularityError("refinement did not converge near a singular point");
          }
        }
        continue;
      }
      parents.push_back(id);
    }
    if (parents.empty()) continue;

    const std::size_t first = layout_.cells.size();
    for (std::size_t id : parents) {
      Cell& parent = layout_.cells[id];
      parent.leaf = false;
      const auto axis = static_cast<std::size_t>(parent.split_axis);
      const double mid = 0.5 * (parent.lo[axis] + parent.hi[axis]);
      Cell a = parent;
      Cell b = parent;
      a.hi[axis] = mid;
      b.lo[axis] = mid;
      a.depth = b.depth = parent.depth + 1;
      a.leaf = b.leaf = true;
      layout_.cells.push_back(a);
      layout_.cells.push_back(b);
    }
    evaluate_range(first, layout_.cells.size());
    for (std::size_t i = 0; i < parents.size(); ++i) {
      const std::size_t pid = parents[i];
      for (std::size_t q = 0; q < ncomp_; ++q) {
        run_value[q] -= values_[pid * ncomp_ + q];
        run_error[q] -= errors_[pid * ncomp_ + q];
        for (std::size_t c = 0; c < 2; ++c) {
          const std::size_t cid = first + 2 * i + c;
          run_value[q] += values_[cid * ncomp_ + q];
          run_error[q] += errors_[cid * ncomp_ + q];
        }
      }
    }
    for (std::size_t cid = first; cid < layout_.cells.size(); ++cid) {
      const double p = priority(cid);
      if (p > 0.0) heap.emplace(p, cid);
    }
    if (++iteration % 256 == 0) {
      totals(run_value, run_error);
    }
  }
  if (!converged) totals(value, error);

  const double scale = std::pow(params_.eps(), layout_.dim);
  std::vector<NormEstimate> out(ncomp_);
  for (std::size_t q = 0; q < ncomp_; ++q) {
    out[q].value = value[q] * scale;
    out[q].error_estimate = error[q] * scale;
    out[q].evaluations = evaluations_;
    out[q].converged = evaluations_ <= options_.max_evaluations &&
                       error[q] <= std::max(options_.rel_tol * std::abs(value[q]), options_.abs_tol);
  }
  return out;
}

std::vector<NormEstimate> run_engine(const PointEval& eval, std::size_t ncomp, const Region& region,
                                     const ProblemParams& params, const QuadratureOptions& options) {
  if (ncomp == 0) throw DomainError("at least one component is required");
  if (!(options.rel_tol > 0.0) && !(options.abs_tol > 0.0)) throw DomainError("tolerance must be positive");
  QuadratureOptions scaled = options;
  // abs_tol refers to the physical integral; the engine works in scaled units.
  scaled.abs_tol = options.abs_tol / std::pow(params.eps(), region.dim);
  Engine engine(region, params, eval, ncomp, scaled);
  return engine.run();
}

QuadratureOptions with_rel(double rel_tol) {
  QuadratureOptions o;
  o.rel_tol = rel_tol;
  return o;
}

}  // namespace

Region Region::unit_cube(std::span<const double> center) {
  if (center.size() < 2 || center.size() > 3) throw DomainError("center must have 2 or 3 coordinates");
  Region r;
  r.base = BaseDomain::unit_cube;
  r.dim = static_cast<int>(center.size());
  r.center = {0.0, 0.0, 0.0};
  std::copy(center.begin(), center.end(), r.center.begin());
  return r;
}

Region Region::slab(std::span<const double> center) {
  Region r = unit_cube(center);
  r.base = BaseDomain::slab;
  return r;
}

Region Region::intersect_ball(double radius) const {
  if (!(radius > 0.0 && radius <= 0.125)) throw DomainError("ball radius must be in (0, 1/8]");
  Region r = *this;
  r.modifier = Modifier::intersect_ball;
  r.rho = radius;
  return r;
}

Region Region::minus_ball(double radius) const {
  if (!(radius > 0.0 && radius <= 0.125)) throw DomainError("ball radius must be in (0, 1/8]");
  Region r = *this;
  r.modifier = Modifier::minus_ball;
  r.rho = radius;
  return r;
}

Region Region::proof_subdomain(ProofTag which, double radius) const {
  if (which == ProofTag::omega3_cone2 && !(radius > 0.0 && radius <= 0.125)) {
    throw DomainError("ball radius must be in (0, 1/8]");
  }
  Region r = *this;
  r.modifier = Modifier::proof_subdomain;
  r.tag = which;
  r.rho = radius;
  return r;
}

WakeCoords WakeCoords::from_scaled(std::span<const double> xi_hat) {
  if (xi_hat.size() != 3) throw DomainError("wake coordinates need three components");
  if (!(xi_hat[0] > 0.0)) throw DomainError("wake coordinates need xi_hat_1 > 0");
  const double s = std::sqrt(2.0 * xi_hat[0]);
  return WakeCoords{xi_hat[0], xi_hat[1] / s, xi_hat[2] / s};
}

std::array<double, 3> WakeCoords::to_scaled() const {
  const double s = std::sqrt(2.0 * xi_hat_1);
  return {xi_hat_1, psi_2 * s, psi_3 * s};
}

NormEstimate l1_norm(const ScalarField& field, const Region& region, const ProblemParams& params,
                     double rel_tol) {
  return l1_norm(field, region, params, with_rel(rel_tol));
}

NormEstimate l1_norm(const ScalarField& field, const Region& region, const ProblemParams& params,
                     const QuadratureOptions& options) {
  const PointEval eval = [&](const SamplePoint& p, std::span<double> out) { out[0] = std::abs(field(p)); };
  return run_engine(eval, 1, region, params, options).front();
}

NormEstimate w11_norm(const BundleField& field, const Region& region, const ProblemParams& params,
                      double rel_tol) {
  return w11_norm(field, region, params, with_rel(rel_tol));
}

NormEstimate w11_norm(const BundleField& field, const Region& region, const ProblemParams& params,
                      const QuadratureOptions& options) {
  const int dim = region.dim;
  const PointEval eval = [&](const SamplePoint& p, std::span<double> out) {
    const DerivativeBundle b = field(p);
    double s = std::abs(b.g);
    for (int k = 0; k < dim; ++k) s += std::abs(b.grad(k));
    out[0] = s;
  };
  return run_engine(eval, 1, region, params, options).front();
}

std::vector<NormEstimate> l1_norms(const VectorField& field, std::size_t components, const Region& region,
                                   const ProblemParams& params, const QuadratureOptions& options) {
  const PointEval eval = [&](const SamplePoint& p, std::span<double> out) {
    field(p, out);
    for (double& v : out) v = std::abs(v);
  };
  return run_engine(eval, components, region, params, options);
}

NormEstimate integrate(const ScalarField& field, const Region& region, const ProblemParams& params,
                       const QuadratureOptions& options) {
  const PointEval eval = [&](const SamplePoint& p, std::span<double> out) { out[0] = field(p); };
  return run_engine(eval, 1, region, params, options).front();
}

double slab_truncation(const ProblemParams& params, double center_x1) {
  if (!(center_x1 > 0.0 && center_x1 < 1.0)) throw DomainError("slab center must satisfy 0 < x1 < 1");
  const double k = std::log(1e18) / params.alpha();
  const double l = (1.0 - center_x1) / params.eps();
  return std::sqrt(k * (2.0 * l + k));
}

}  // namespace layergreen::quadrature
