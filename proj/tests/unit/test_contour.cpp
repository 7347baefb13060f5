#include <doctest.h>

#include <cmath>
#include <limits>

#include "layergreen/contour.hpp"
#include "layergreen/error.hpp"

using namespace layergreen;
using namespace layergreen::contour;

namespace {

Grid sample(int n, double lo, double hi, double (*f)(double, double)) {
  Grid g;
  for (int i = 0; i < n; ++i) {
    const double t = lo + (hi - lo) * i / (n - 1);
    g.x.push_back(t);
    g.y.push_back(t);
  }
  for (double y : g.y) {
    for (double x : g.x) g.values.push_back(f(x, y));
  }
  return g;
}

}  // namespace

TEST_CASE("circle") {
  const auto g = sample(101, -1.0, 1.0, [](double x, double y) { return x * x + y * y; });
  const auto lines = isolines(g, 0.25);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].closed);
  for (const auto& p : lines[0].points) {
    CHECK(std::hypot(p[0], p[1]) == doctest::Approx(0.5).epsilon(2e-3));
  }
  const auto box = bounding_box(lines);
  CHECK(box.width() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(box.height() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("ellipse anisotropy") {
  const auto g = sample(201, -1.0, 1.0, [](double x, double y) { return x * x / 0.64 + y * y / 0.04; });
  const auto box = bounding_box(isolines(g, 1.0));
  CHECK(box.width() / box.height() == doctest::Approx(4.0).epsilon(1e-2));
}

TEST_CASE("open line") {
  const auto g = sample(11, 0.0, 1.0, [](double x, double) { return x; });
  const auto lines = isolines(g, 0.55);
  REQUIRE(lines.size() == 1);
  CHECK(!lines[0].closed);
  CHECK(lines[0].points.size() == 11);
  for (const auto& p : lines[0].points) CHECK(p[0] == doctest::Approx(0.55));
}

TEST_CASE("empty and degenerate") {
  const auto g = sample(11, 0.0, 1.0, [](double x, double y) { return x + y; });
  CHECK(isolines(g, 5.0).empty());
  CHECK_THROWS_AS(bounding_box({}), DomainError);
}

TEST_CASE("infinite samples count as above the level") {
  auto g = sample(21, -1.0, 1.0, [](double x, double y) { return 1.0 / std::hypot(x, y + 1e-3); });
  g.values[10 * 21 + 10] = std::numeric_limits<double>::infinity();
  const auto lines = isolines(g, 2.0);
  REQUIRE(!lines.empty());
  for (const auto& l : lines) {
    for (const auto& p : l.points) {
      CHECK(std::isfinite(p[0]));
      CHECK(std::isfinite(p[1]));
    }
  }
}

TEST_CASE("saddle and two components") {
  const auto g = sample(81, -1.0, 1.0, [](double x, double y) {
    return std::exp(-20.0 * ((x - 0.5) * (x - 0.5) + y * y)) + std::exp(-20.0 * ((x + 0.5) * (x + 0.5) + y * y));
  });
  const auto lines = isolines(g, 0.5);
  CHECK(lines.size() == 2);
  for (const auto& l : lines) CHECK(l.closed);
  const auto again = isolines(g, 0.5);
  REQUIRE(again.size() == lines.size());
  CHECK(again[0].points == lines[0].points);
}
