#include <benchmark/benchmark.h>

#include "multisym/legendre.hpp"
#include "multisym/surfaces.hpp"

using namespace multisym;

static void BM_WedgeVectors(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  Rng rng = sample_stream(1, 0);
  const Eigen::MatrixXd columns = gaussian_matrix(rng, n, p);
  for (auto _ : state) benchmark::DoNotOptimize(wedge_vectors(columns));
}
BENCHMARK(BM_WedgeVectors)->Args({3, 2})->Args({4, 2})->Args({6, 3});

static void BM_LagrangianAction(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const auto area = area_lagrangian(3, 2);
  const ParametricGrid grid = bilinear_graph(Domain::unit(2), {r, r}).grid();
  for (auto _ : state) benchmark::DoNotOptimize(lagrangian_action(area, grid));
  state.SetItemsProcessed(state.iterations() * r * r);
}
BENCHMARK(BM_LagrangianAction)->Arg(64)->Arg(256);

static void BM_MultisymplecticAction(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const auto area = area_lagrangian(3, 2);
  const ParametricGrid grid = bilinear_graph(Domain::unit(2), {r, r}).grid();
  for (auto _ : state) benchmark::DoNotOptimize(multisymplectic_action(area, grid));
  state.SetItemsProcessed(state.iterations() * r * r);
}
BENCHMARK(BM_MultisymplecticAction)->Arg(64);

static void BM_InverseLegendre(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto ell = ellipsoid_lagrangian(n, 2, Eigen::VectorXd::LinSpaced(binomial(n, 2), 1.0, 9.0));
  Rng rng = sample_stream(2, 0);
  const Point x = Point::Zero(n);
  const KCovector p = legendre_map(ell, x, wedge_vectors(gaussian_matrix(rng, n, 2))).p;
  for (auto _ : state) benchmark::DoNotOptimize(inverse_legendre(ell, x, p));
}
BENCHMARK(BM_InverseLegendre)->Arg(3)->Arg(4);
BENCHMARK_MAIN();
