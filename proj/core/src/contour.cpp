#include "layergreen/contour.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "layergreen/error.hpp"

namespace layergreen::contour {

namespace {

struct Segment {
  std::size_t a;
  std::size_t b;
};

}  // namespace

std::vector<Polyline> isolines(const Grid& grid, double level) {
  const std::size_t nx = grid.x.size();
  const std::size_t ny = grid.y.size();
  if (nx < 2 || ny < 2 || grid.values.size() != nx * ny) throw DomainError("grid shape mismatch");
  for (double v : grid.values) {
    if (std::isnan(v)) throw DomainError("grid contains NaN");
  }

  // Edge ids: 2*(j*nx+i) runs along x from node (i,j), 2*(j*nx+i)+1 along y.
  std::map<std::size_t, std::array<double, 2>> crossing;
  auto edge_point = [&](std::size_t i, std::size_t j, bool along_y) {
    const std::size_t id = 2 * (j * nx + i) + (along_y ? 1 : 0);
    if (!crossing.count(id)) {
      const std::size_t i2 = along_y ? i : i + 1;
      const std::size_t j2 = along_y ? j + 1 : j;
      const double va = grid.at(i, j);
      const double vb = grid.at(i2, j2);
      double t = 0.5;
      if (std::isinf(va)) {
        t = 1.0;
      } else if (std::isinf(vb)) {
        t = 0.0;
      } else if (vb != va) {
        t = std::clamp((level - va) / (vb - va), 0.0, 1.0);
      }
      crossing[id] = {grid.x[i] + t * (grid.x[i2] - grid.x[i]), grid.y[j] + t * (grid.y[j2] - grid.y[j])};
    }
    return id;
  };

  std::vector<Segment> segments;
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const double v0 = grid.at(i, j);
      const double v1 = grid.at(i + 1, j);
      const double v2 = grid.at(i + 1, j + 1);
      const double v3 = grid.at(i, j + 1);
      const int code = (v0 > level ? 1 : 0) | (v1 > level ? 2 : 0) | (v2 > level ? 4 : 0) | (v3 > level ? 8 : 0);
      if (code == 0 || code == 15) continue;
      auto bottom = [&] { return edge_point(i, j, false); };
      auto right = [&] { return edge_point(i + 1, j, true); };
      auto top = [&] { return edge_point(i, j + 1, false); };
      auto left = [&] { return edge_point(i, j, true); };
      switch (code) {
        case 1: case 14: segments.push_back({left(), bottom()}); break;
        case 2: case 13: segments.push_back({bottom(), right()}); break;
        case 3: case 12: segments.push_back({left(), right()}); break;
        case 4: case 11: segments.push_back({right(), top()}); break;
        case 6: case 9: segments.push_back({bottom(), top()}); break;
        case 7: case 8: segments.push_back({left(), top()}); break;
        case 5: case 10: {
          const double centre = 0.25 * (v0 + v1 + v2 + v3);
          const bool centre_high = centre > level;
          // code 5: corners 0 and 2 high
          if ((code == 5) == centre_high) {
            segments.push_back({left(), top()});
            segments.push_back({bottom(), right()});
          } else {
            segments.push_back({left(), bottom()});
            segments.push_back({right(), top()});
          }
          break;
        }
        default: break;
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].a].push_back(s);
    incident[segments[s].b].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);

  auto walk = [&](std::size_t start_seg, std::size_t start_edge) {
    Polyline line;
    line.points.push_back(crossing[start_edge]);
    std::size_t seg = start_seg;
    std::size_t edge = start_edge;
    while (true) {
      used[seg] = true;
      const std::size_t next = segments[seg].a == edge ? segments[seg].b : segments[seg].a;
      line.points.push_back(crossing[next]);
      edge = next;
      std::size_t found = segments.size();
      for (std::size_t s : incident[edge]) {
        if (!used[s]) {
          found = s;
          break;
        }
      }
      if (found == segments.size()) break;
      seg = found;
    }
    line.closed = edge == start_edge && line.points.size() > 2;
    return line;
  };

  std::vector<Polyline> out;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (std::size_t e : {segments[s].a, segments[s].b}) {
      if (incident[e].size() == 1) {
        out.push_back(walk(s, e));
        break;
      }
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) out.push_back(walk(s, segments[s].a));
  }
  return out;
}

BoundingBox bounding_box(const std::vector<Polyline>& lines) {
  BoundingBox b;
  bool first = true;
  for (const auto& l : lines) {
    for (const auto& p : l.points) {
      if (first) {
        b = {p[0], p[0], p[1], p[1]};
        first = false;
      }
      b.x_min = std::min(b.x_min, p[0]);
      b.x_max = std::max(b.x_max, p[0]);
      b.y_min = std::min(b.y_min, p[1]);
      b.y_max = std::max(b.y_max, p[1]);
    }
  }
  if (first) throw DomainError("no contour points");
  return b;
}

}  // namespace layergreen::contour
