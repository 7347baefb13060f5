#include <algorithm>
#include <cmath>
#include <vector>

#include "layergreen/error.hpp"
#include "layergreen/parallel.hpp"
#include "layergreen/quadrature.hpp"
#include "region_geometry.hpp"

namespace layergreen::quadrature {

namespace {

struct Segment {
  double lo;
  double hi;
  int count;
};

// Axis split at +-H*2^j; every segment gets the same number of midpoints.
std::vector<Segment> axis_segments(double lo, double hi, double block, int n) {
  std::vector<double> pts{lo, hi};
  for (double s = block; s < std::max(-lo, hi); s *= 2.0) {
    pts.push_back(s);
    pts.push_back(-s);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> cuts;
  for (double p : pts) {
    if (p < lo || p > hi) continue;
    if (cuts.empty() || p - cuts.back() > 1e-12) cuts.push_back(p);
  }
  const int per = std::max(2, (n + static_cast<int>(cuts.size()) - 2) / static_cast<int>(cuts.size() - 1));
  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.push_back({cuts[i], cuts[i + 1], per});
  return out;
}

struct Node {
  double x;
  double w;
};

std::vector<Node> midpoints(const std::vector<Segment>& segs) {
  std::vector<Node> out;
  for (const auto& s : segs) {
    const double h = (s.hi - s.lo) / s.count;
    for (int i = 0; i < s.count; ++i) out.push_back({s.lo + (i + 0.5) * h, h});
  }
  return out;
}

double riemann_sum(const ScalarField& field, const Region& region, const ProblemParams& params,
                   const geometry::ScaledBox& box, double block, int radial_mode, double rho_hat,
                   bool outer, int n) {
  const int d = box.dim;
  const double eps = params.eps();
  auto sample = [&](const std::array<double, 3>& xi_hat) {
    SamplePoint sp;
    sp.dim = d;
    sp.xi_hat = xi_hat;
    for (int k = 0; k < d; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      sp.xi[ku] = region.center[ku] + eps * xi_hat[ku];
    }
    const double v = std::abs(field(sp));
    if (!std::isfinite(v)) throw SingularityError("integrand is not finite at an oracle node");
    return v;
  };

  std::vector<double> partial;
  CompensatedSum total;

  if (outer) {
    std::vector<std::vector<Node>> nodes;
    for (int k = 0; k < d; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      nodes.push_back(midpoints(axis_segments(box.lo[ku], box.hi[ku], block, n)));
    }
    if (d == 2) nodes.push_back({{0.0, 1.0}});
    const auto& n0 = nodes[0];
    partial.assign(n0.size(), 0.0);
    parallel_for(n0.size(), [&](std::size_t i) {
      CompensatedSum s;
      for (const auto& b : nodes[1]) {
        for (const auto& c : nodes[2]) {
          std::array<double, 3> p{n0[i].x, b.x, d == 3 ? c.x : 0.0};
          if (std::abs(p[0]) < block && std::abs(p[1]) < block && (d == 2 || std::abs(p[2]) < block)) continue;
          s.add(sample(p) * n0[i].w * b.w * c.w);
        }
      }
      partial[i] = s.value();
    });
    for (double v : partial) total.add(v);
  }

  // Pyramids filling the block [-block, block]^d, uniform midpoints in (s, u, v).
  const int m = std::max(2, n / 2);
  const int faces = 2 * d;
  partial.assign(static_cast<std::size_t>(faces * m), 0.0);
  parallel_for(partial.size(), [&](std::size_t job) {
    const int face = static_cast<int>(job) / m;
    const int is = static_cast<int>(job) % m;
    geometry::Pyramid pyr{d, face / 2, face % 2 == 0 ? -1.0 : 1.0, block, rho_hat, radial_mode};
    const double hs = 1.0 / m;
    const double hu = 2.0 / m;
    CompensatedSum s;
    const int mv = d == 3 ? m : 1;
    for (int iu = 0; iu < m; ++iu) {
      for (int iv = 0; iv < mv; ++iv) {
        const double param[3] = {(is + 0.5) * hs, -1.0 + (iu + 0.5) * hu, d == 3 ? -1.0 + (iv + 0.5) * hu : 0.0};
        std::array<double, 3> p{};
        const double jac = pyr.map(param, p.data());
        s.add(sample(p) * jac * hs * hu * (d == 3 ? hu : 1.0));
      }
    }
    partial[job] = s.value();
  });
  for (double v : partial) total.add(v);
  return total.value() * std::pow(eps, d);
}

}  // namespace

NormEstimate oracle_riemann(const ScalarField& field, const Region& region, const ProblemParams& params,
                            int n_per_axis) {
  if (n_per_axis < 4 || n_per_axis > 512) throw DomainError("oracle resolution must be in [4, 512]");
  if (region.modifier == Modifier::proof_subdomain) throw DomainError("oracle does not cover proof subdomains");
  const geometry::ScaledBox box = geometry::scaled_domain(region, params);
  const double dist = box.inner_distance();
  const double rho_hat = region.rho / params.eps();

  double block = std::min(1.0, 0.9 * dist);
  int mode = 0;
  bool outer = true;
  if (region.modifier == Modifier::minus_ball) {
    block = std::min(std::max(1.0, 2.0 * rho_hat), 0.9 * dist);
    if (block <= rho_hat) throw DomainError("ball must lie inside the domain with a margin");
    mode = 1;
  } else if (region.modifier == Modifier::intersect_ball) {
    block = rho_hat;
    mode = 2;
    outer = false;
  }

  const double fine = riemann_sum(field, region, params, box, block, mode, rho_hat, outer, n_per_axis);
  const double coarse = riemann_sum(field, region, params, box, block, mode, rho_hat, outer, n_per_axis / 2);
  NormEstimate est;
  est.value = fine;
  est.error_estimate = std::abs(fine - coarse);
  const std::size_t per_axis = static_cast<std::size_t>(n_per_axis);
  est.evaluations = per_axis * per_axis * (box.dim == 3 ? per_axis : 1);
  est.converged = true;
  return est;
}

}  // namespace layergreen::quadrature
