#include <doctest.h>

#include <cmath>
#include <set>

#include "layergreen/error.hpp"
#include "layergreen/sweep.hpp"

using namespace layergreen;
using namespace layergreen::sweep;

namespace {

SweepRow row(double eps, double rho, double ratio, bool tainted = false) {
  SweepRow r;
  r.eps = eps;
  r.rho = rho;
  r.ratio = ratio;
  r.value = ratio * (1.0 + std::abs(std::log(eps)));
  r.tainted = tainted;
  return r;
}

NormProvider exact_shape(double c) {
  return [c](const BoundSpec& spec, const ProblemParams& params, const quadrature::Region& region,
             std::span<const double>, images::Domain, const quadrature::QuadratureOptions&) {
    quadrature::NormEstimate e;
    e.value = c * spec.shape(params.eps(), region.modifier == quadrature::Modifier::none ? 0.0 : region.rho);
    e.converged = true;
    e.evaluations = 1;
    return e;
  };
}

}  // namespace

TEST_CASE("catalog") {
  const auto& cat = builtin_catalog();
  CHECK(cat.size() == 11);
  std::set<std::string> names;
  int upper = 0;
  for (const auto& s : cat) {
    names.insert(s.name);
    upper += s.side == Side::upper ? 1 : 0;
  }
  CHECK(names.size() == 11);
  CHECK(upper == 5);
  const auto& d1 = find_spec("lower_d1_log");
  CHECK(d1.quantity == Quantity::d1);
  CHECK(d1.region == RegionRule::full);
  CHECK(d1.shape(std::exp(-3.0), 0.0) == doctest::Approx(3.0));
  const auto& ball = find_spec("lower_ball_w11");
  CHECK(ball.quantity == Quantity::value_plus_grad);
  CHECK(ball.region == RegionRule::intersect_ball);
  const double eps = 1.0 / 256.0;
  CHECK(ball.shape(eps, eps) == doctest::Approx(1.0));
  CHECK(ball.shape(eps, 2.0 * eps) == doctest::Approx(2.0));
  CHECK(ball.shape(eps, 8.0 * eps) == doctest::Approx(std::sqrt(8.0)));
  CHECK_THROWS_AS(find_spec("nope"), SweepError);
  try {
    find_spec("nope");
  } catch (const SweepError& e) {
    CHECK(std::string(e.what()).find("lower_d22_log") != std::string::npos);
  }
}

TEST_CASE("second-derivative shapes decrease in rho") {
  for (const char* name : {"lower_d11_log", "lower_d22_log", "d11_log", "d22_log"}) {
    const auto& s = find_spec(name);
    CHECK(s.region == RegionRule::minus_ball);
    const double eps = 1.0 / 64.0;
    CHECK(s.shape(eps, eps / 32.0) > s.shape(eps, eps / 16.0));
    CHECK(s.shape(eps, eps / 16.0) > s.shape(eps, eps));
    const auto radii = rho_values(s.rho_rule, eps);
    REQUIRE(radii.size() == 1);
    CHECK(radii[0] == eps / 16.0);
  }
}

TEST_CASE("ball radii") {
  const auto& s = find_spec("lower_ball_w11");
  const double eps = 1.0 / 256.0;
  const auto radii = rho_values(s.rho_rule, eps);
  CHECK(radii.front() == eps / 4.0);
  CHECK(radii.back() == 0.125);
  for (std::size_t i = 1; i < radii.size(); ++i) CHECK(radii[i] > radii[i - 1]);
  const auto coarse = rho_values(s.rho_rule, 1.0 / 16.0);
  CHECK(coarse.back() == 0.125);
}

TEST_CASE("fit_band arithmetic") {
  const std::vector<SweepRow> rows{row(0.1, 0, 2.0), row(0.05, 0, 2.2), row(0.025, 0, 2.1)};
  const auto b = fit_band(rows);
  CHECK(b.c_min == 2.0);
  CHECK(b.c_max == 2.2);
  CHECK(b.spread == doctest::Approx(1.1));
  CHECK(b.valid_rows == 3);
  CHECK(b.growth == doctest::Approx(1.1));

  const std::vector<SweepRow> with_taint{row(0.1, 0, 2.0), row(0.05, 0, 9.0, true), row(0.025, 0, 2.1)};
  const auto t = fit_band(with_taint);
  CHECK(t.valid_rows == 2);
  CHECK(t.c_max == 2.1);

  const std::vector<SweepRow> exact{row(0.1, 0, 3.0), row(0.01, 0, 3.0), row(0.001, 0, 3.0)};
  CHECK(std::abs(fit_band(exact).slope - 1.0) <= 1e-12);

  const std::vector<SweepRow> one{row(0.1, 0, 2.0), row(0.05, 0, 2.2, true)};
  CHECK_THROWS_AS(fit_band(one), SweepError);
}

TEST_CASE("growth only compares dominated pairs") {
  // Ratio falls with eps: growth stays 1 even though the spread is large.
  const std::vector<SweepRow> rows{row(0.1, 0, 8.0), row(0.05, 0, 4.0), row(0.025, 0, 2.0)};
  const auto b = fit_band(rows);
  CHECK(b.spread == 4.0);
  CHECK(b.growth == 1.0);
}

TEST_CASE("loglog slope") {
  const std::vector<double> x{1.0, 2.0, 4.0, 8.0};
  const std::vector<double> y{3.0, 3.0 * std::sqrt(2.0), 6.0, 6.0 * std::sqrt(2.0)};
  CHECK(loglog_slope(x, y) == doctest::Approx(0.5).epsilon(1e-14));
  const std::vector<double> same{2.0, 2.0};
  CHECK_THROWS_AS(loglog_slope(same, same), SweepError);
}

TEST_CASE("synthetic provider gives an exact band") {
  SweepConfig cfg;
  cfg.eps_list = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  cfg.provider = exact_shape(3.7);
  for (const char* name : {"lower_d2_sqrt", "lower_ball_w11", "d22_log"}) {
    const auto rep = run_sweep(find_spec(name), cfg);
    CHECK(rep.band.c_min == doctest::Approx(3.7).epsilon(1e-14));
    CHECK(rep.band.c_max == doctest::Approx(3.7).epsilon(1e-14));
    CHECK(rep.band.spread == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.pass);
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
      const auto& a = rep.rows[i - 1];
      const auto& b = rep.rows[i];
      CHECK((a.eps > b.eps || (a.eps == b.eps && a.rho < b.rho)));
    }
  }
}

TEST_CASE("non-converged rows are tainted and fail the verdict") {
  SweepConfig cfg;
  cfg.eps_list = {1.0 / 16, 1.0 / 32, 1.0 / 64};
  int calls = 0;
  cfg.provider = [&](const BoundSpec& spec, const ProblemParams& params, const quadrature::Region&,
                     std::span<const double>, images::Domain, const quadrature::QuadratureOptions&) {
    quadrature::NormEstimate e;
    e.value = 2.0 * spec.shape(params.eps(), 0.0);
    e.converged = ++calls != 2;
    return e;
  };
  const auto rep = run_sweep(find_spec("lower_d1_log"), cfg);
  CHECK(rep.rows[1].tainted);
  CHECK(rep.band.valid_rows == 2);
  CHECK(!rep.pass);
  CHECK(rep.notes.size() == 1);
}

TEST_CASE("sweep preconditions") {
  SweepConfig cfg;
  cfg.provider = exact_shape(1.0);
  cfg.eps_list = {0.1};
  CHECK_THROWS_AS(run_sweep(find_spec("lower_d1_log"), cfg), DomainError);
  cfg.eps_list = {1.0 / 16, 1.0 / 32};
  cfg.x = {0.2, 0.5, 0.5};
  CHECK_THROWS_AS(run_sweep(find_spec("lower_d1_log"), cfg), DomainError);
}

TEST_CASE("real sweep is deterministic") {
  SweepConfig cfg;
  cfg.eps_list = {1.0 / 16, 1.0 / 32};
  const auto a = run_sweep(find_spec("lower_d2_sqrt"), cfg);
  const auto b = run_sweep(find_spec("lower_d2_sqrt"), cfg);
  REQUIRE(a.rows.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(a.rows[i].value == b.rows[i].value);
    CHECK(a.rows[i].converged);
  }
}
