#include <benchmark/benchmark.h>

#include <array>
#include <cmath>

#include "layergreen/images.hpp"
#include "layergreen/quadrature.hpp"

using namespace layergreen;

static void BM_L1NormD1(benchmark::State& state) {
  const double eps = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  const auto params = ProblemParams::make(eps, 1.0);
  const std::array<double, 3> x{0.5, 0.5, 0.5};
  const images::Approximation approx(params, x, images::Domain::cube);
  const auto region = quadrature::Region::unit_cube(x);
  quadrature::QuadratureOptions opts{1e-3};
  opts.threads = 1;
  std::size_t evals = 0;
  for (auto _ : state) {
    const auto r = quadrature::l1_norm(
        [&](const quadrature::SamplePoint& p) { return approx.jet_offset(p.scaled()).bundle.d1; }, region, params,
        opts);
    evals = r.evaluations;
    benchmark::DoNotOptimize(r.value);
  }
  state.counters["evaluations"] = static_cast<double>(evals);
}
BENCHMARK(BM_L1NormD1)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_VolumeCube(benchmark::State& state) {
  const auto params = ProblemParams::make(1.0 / 32, 1.0);
  const std::array<double, 3> x{0.5, 0.5, 0.5};
  const auto region = quadrature::Region::unit_cube(x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        quadrature::l1_norm([](const quadrature::SamplePoint&) { return 1.0; }, region, params, 1e-10).value);
  }
}
BENCHMARK(BM_VolumeCube)->Unit(benchmark::kMillisecond);
