#include <benchmark/benchmark.h>

#include <array>
#include <cmath>

#include "layergreen/images.hpp"
#include "layergreen/kernel.hpp"
#include "layergreen/special.hpp"

using namespace layergreen;

static void BM_BesselK1Scaled(benchmark::State& state) {
  const auto order = special::BesselOrder::from_twice(2);
  double z = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(special::bessel_k_scaled(order, z));
    z = z > 40.0 ? 0.01 : z * 1.07;
  }
}
BENCHMARK(BM_BesselK1Scaled);

static void BM_G3Derivs(benchmark::State& state) {
  const auto params = ProblemParams::make(0.01, 1.0);
  const std::array<double, 3> x{0.5, 0.5, 0.5};
  std::array<double, 3> xi{0.52, 0.49, 0.51};
  for (auto _ : state) {
    const auto frame = make_frame(x, xi, params, x[0]);
    benchmark::DoNotOptimize(g3_derivs(params, frame));
    xi[0] = xi[0] > 0.9 ? 0.2 : xi[0] + 1e-3;
  }
}
BENCHMARK(BM_G3Derivs);

static void BM_CubeJet(benchmark::State& state) {
  const auto params = ProblemParams::make(1.0 / 64, 1.0);
  const std::array<double, 3> x{0.5, 0.5, 0.5};
  const images::Approximation approx(params, x, images::Domain::cube);
  std::array<double, 3> xi{0.3, 0.2, 0.7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(approx.jet(xi));
    xi[0] = xi[0] > 0.95 ? 0.05 : xi[0] + 1e-3;
  }
}
BENCHMARK(BM_CubeJet);

static void BM_SlabJet(benchmark::State& state) {
  const auto params = ProblemParams::make(1.0 / 64, 1.0);
  const std::array<double, 3> x{0.5, 0.5, 0.5};
  const images::Approximation approx(params, x, images::Domain::slab);
  std::array<double, 3> xi{0.3, 0.2, 0.7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(approx.jet(xi));
    xi[0] = xi[0] > 0.95 ? 0.05 : xi[0] + 1e-3;
  }
}
BENCHMARK(BM_SlabJet);
