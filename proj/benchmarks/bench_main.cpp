#include "fatmesh/geometry.hpp"
#include "fatmesh/manifold.hpp"
#include "fatmesh/sampling.hpp"
#include "fatmesh/triangulator.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace fatmesh;

std::vector<Point> random_vertices(int k, int nu, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Point> v;
  for (int i = 0; i <= k; ++i) {
    Point p(nu);
    for (int j = 0; j < nu; ++j) p[j] = g(rng);
    v.push_back(p);
  }
  return v;
}

void BM_Thickness(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Simplex s(random_vertices(k, k + 1, 1));
  for (auto _ : state) benchmark::DoNotOptimize(thickness(s));
}
BENCHMARK(BM_Thickness)->DenseRange(1, 4);

void BM_ProjectTorus(benchmark::State& state) {
  const auto m = make_manifold("torus");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  std::vector<Point> pts;
  for (int i = 0; i < 256; ++i) {
    Point p(3);
    p << u(rng), u(rng), 0.3 * u(rng);
    pts.push_back(p);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(project_to_manifold(*m, pts[i++ % pts.size()]));
    } catch (const std::exception&) {
    }
  }
}
BENCHMARK(BM_ProjectTorus);

void BM_SphereNet(benchmark::State& state) {
  const auto m = make_manifold("sphere");
  const double eps = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(maximal_net(*m, Region{m->default_base_point()}, eps, 3));
}
BENCHMARK(BM_SphereNet)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SphereDual(benchmark::State& state) {
  const auto m = make_manifold("sphere");
  const Region region{m->default_base_point()};
  const auto net = maximal_net(*m, region, 1.0 / static_cast<double>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(dual_complex(dirichlet_complex(net, region, *m), *m));
}
BENCHMARK(BM_SphereDual)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
