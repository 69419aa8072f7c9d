// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "plap/capacity.hpp"
#include "plap/eigensolver.hpp"
#include "plap/geometry.hpp"
#include "plap/variational.hpp"

namespace
{

using namespace plap;

std::shared_ptr<const GridDomain> disc(int cells_per_radius)
{
  return std::make_shared<const GridDomain>(generate_domain(ball_spec(2, 1.0), 1.0 / cells_per_radius));
}

void BM_DistanceTransform(benchmark::State &state)
{
  const auto d = generate_domain(spiked_ball_spec(2, 1.0, 8, 0.125, 0.6), 1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(distance_transform(d.grid(), d.mask()));
  }
  state.SetItemsProcessed(state.iterations() * d.grid().cell_count());
}
BENCHMARK(BM_DistanceTransform)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_RayleighGradient(benchmark::State &state)
{
  const auto d = disc(static_cast<int>(state.range(0)));
  const auto u = ScalarField::from_function(d, [](const Point &x) { return 1.0 - x[0] * x[0] - x[1] * x[1]; });
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(rayleigh_gradient(u, 3.0, 1e-8));
  }
  state.SetItemsProcessed(state.iterations() * d->interior_count());
}
BENCHMARK(BM_RayleighGradient)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_PrincipalEigenpair(benchmark::State &state)
{
  const auto d = disc(static_cast<int>(state.range(0)));
  const double p = static_cast<double>(state.range(1)) / 2.0;
  for (auto _ : state)
  {
    const auto r = solve_principal(d, p);
    state.counters["iterations"] = r.iterations;
  }
}
BENCHMARK(BM_PrincipalEigenpair)
    ->Args({32, 4})
    ->Args({64, 4})
    ->Args({32, 3})
    ->Args({32, 6})
    ->Unit(benchmark::kMillisecond);

void BM_RadialCapacity(benchmark::State &state)
{
  const int dim = static_cast<int>(state.range(0));
  const double p = static_cast<double>(state.range(1)) / 2.0;
  const Ball outer{{0.0, 0.0, 0.0}, 1.0};
  CondenserProblem prob;
  prob.grid = condenser_grid(dim, 1.0 / 32, outer);
  prob.outer = outer;
  prob.p = p;
  prob.inner = closed_ball_set(prob.grid, {{0.0, 0.0, 0.0}, 0.5});
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(capacity(prob));
  }
}
BENCHMARK(BM_RadialCapacity)->Args({2, 4})->Args({2, 6})->Args({3, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
