#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "layergreen/contour.hpp"
#include "layergreen/sweep.hpp"

namespace layergreen::cli {

enum ExitCode { ok = 0, usage = 1, pole = 2, not_converged = 3, bound_failed = 4 };

/// Ordered key=value pairs echoed at the top of every output.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// Reads "key=value" lines (optionally prefixed by "# ") up to the first other
/// line, or the "config" object of a JSON document.
ConfigEcho read_config(const std::string& path);

struct SliceConfig {
  double eps = 0.01;
  double alpha = 1.0;
  std::vector<double> x{0.2, 0.5, 1.0 / 3.0};
  /// Fixed coordinate index (0-based) and its value.
  int plane_axis = 2;
  double plane_value = 1.0 / 3.0;
  int resolution = 201;
  std::vector<double> isovalues{1, 4, 8, 16, 32, 64, 128, 256};
};

struct SliceResult {
  /// Axes are the two free coordinates in increasing index order.
  contour::Grid grid;
  std::vector<std::pair<double, std::vector<contour::Polyline>>> contours;
};

/// Cube approximation on a coordinate plane; +inf at the pole.
SliceResult compute_slice(const SliceConfig& config);

std::string sweep_csv(const ConfigEcho& echo, const std::vector<sweep::SweepReport>& reports);
std::string sweep_json(const ConfigEcho& echo, const std::vector<sweep::SweepReport>& reports);

/// Full command line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace layergreen::cli
