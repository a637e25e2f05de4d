#include <benchmark/benchmark.h>

#include "sgdlab/geometry.hpp"
#include "sgdlab/objectives.hpp"
#include "sgdlab/optimizers.hpp"

namespace {

using namespace sgdlab;

void BM_ProjectSimplex(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  ConvexBody body{Simplex{dim, 1.0}};
  Rng rng(7);
  std::vector<Vec> points;
  for (int i = 0; i < 64; ++i) {
    Vec x(dim);
    for (double& c : x) c = rng.uniform(-1.0, 2.0);
    points.push_back(x);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project(body, points[i++ % points.size()]));
  }
}
BENCHMARK(BM_ProjectSimplex)->Arg(8)->Arg(64)->Arg(512);

void BM_ProjectHalfspaces(benchmark::State& state) {
  HalfspaceIntersection h;
  h.constraints.push_back({Vec{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}, 1.0});
  h.constraints.push_back({Vec{-1.0, 0.0}, 1.0});
  h.bounding_box = Box{{-2.0, -2.0}, {2.0, 2.0}};
  h.interior_point = {0.0, 0.0};
  ConvexBody body{std::move(h)};
  Rng rng(7);
  std::vector<Vec> points;
  for (int i = 0; i < 64; ++i) points.push_back({rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project(body, points[i++ % points.size()]));
  }
}
BENCHMARK(BM_ProjectHalfspaces);

void BM_LocalNorm(benchmark::State& state) {
  ConvexBody body{Box{{-1.0, -1.0}, {1.0, 1.0}}};
  Rng rng(11);
  LocalNormQuery q{{0.9, 0.0}, rng.unit_direction(2), 0.3, static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_norm(body, q));
  }
}
BENCHMARK(BM_LocalNorm)->Arg(64)->Arg(512);

void BM_RapgdQuadratic(benchmark::State& state) {
  const long long T = state.range(0);
  ConvexBody body{Box{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}}};
  ConvexObjective f = make_quadratic({0.4, -0.2, 0.7}, body);
  const Vec u1{-1.0, -1.0, -1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_rapgd(f, body, Schedule::inverse_sqrt(1.0), u1, T));
  }
}
BENCHMARK(BM_RapgdQuadratic)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
