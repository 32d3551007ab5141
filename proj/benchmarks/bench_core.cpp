#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hamrep/bolza.hpp"
#include "hamrep/conjugate.hpp"
#include "hamrep/convex_geometry.hpp"
#include "hamrep/representation.hpp"

using namespace hamrep;

namespace {

geometry::ConvexBody random_polygon(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 2.0 * std::numbers::pi);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    const double th = U(rng);
    pts.push_back(Point{std::cos(th), std::sin(th)});
  }
  return geometry::ConvexBody::hull(pts);
}

void BM_SteinerQuadrature(benchmark::State& state) {
  const auto K = random_polygon(static_cast<int>(state.range(0)), 1);
  const auto Q = geometry::SphereQuadrature::default_for(2);
  for (auto _ : state) benchmark::DoNotOptimize(geometry::steiner_point(K, Q));
}
BENCHMARK(BM_SteinerQuadrature)->Arg(8)->Arg(64)->Arg(512);

void BM_SteinerExact(benchmark::State& state) {
  const auto K = random_polygon(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(geometry::steiner_point_exact(K));
}
BENCHMARK(BM_SteinerExact)->Arg(8)->Arg(64)->Arg(512);

void BM_POperator(benchmark::State& state) {
  const auto K = random_polygon(static_cast<int>(state.range(0)), 2);
  const Point y{1.8, 0.6};
  for (auto _ : state) benchmark::DoNotOptimize(geometry::ball_intersect_P(y, K));
}
BENCHMARK(BM_POperator)->Arg(16)->Arg(256);

void BM_ConstructE(benchmark::State& state) {
  const auto& e = models::find_entry("EX2");
  const representation::Representation rep(e.hamiltonian, e.lagrangian);
  const auto loc = rep.at(0.0, 0.5);
  const auto cloud = representation::control_cloud(256, 1);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(loc.e(cloud[i++ % cloud.size()]));
}
BENCHMARK(BM_ConstructE);

void BM_LocalRepresentation(benchmark::State& state) {
  const auto& e = models::find_entry("EX2");
  const representation::Representation rep(e.hamiltonian, e.lagrangian);
  for (auto _ : state) benchmark::DoNotOptimize(rep.at(0.0, 0.5));
}
BENCHMARK(BM_LocalRepresentation);

void BM_ConjugateGrid(benchmark::State& state) {
  const double h = 40.0 / static_cast<double>(state.range(0));
  const auto g = conjugate::GridFunction::sample(conjugate::Grid(conjugate::Axis::with_step(-20.0, 20.0, h)),
                                                 [](const Point& p) { return std::sqrt(1.0 + p[0] * p[0]); });
  const conjugate::Grid dual(conjugate::padded_slope_axis(1.0, 1e-3));
  for (auto _ : state) benchmark::DoNotOptimize(conjugate::conjugate_grid(g, dual));
}
BENCHMARK(BM_ConjugateGrid)->Arg(4000)->Arg(40000)->Unit(benchmark::kMillisecond);

void BM_VariationalDP(benchmark::State& state) {
  const auto& e = models::find_entry("EX2");
  bolza::BolzaSpec s;
  s.cost = bolza::EndpointCost::terminal(0.0, [](double x) { return ExtReal(std::abs(x)); });
  s.Nt = static_cast<int>(state.range(0));
  s.Nx = 4 * s.Nt + 1;
  for (auto _ : state) benchmark::DoNotOptimize(bolza::solve_variational(s, e.hamiltonian, e.lagrangian));
}
BENCHMARK(BM_VariationalDP)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_ControlDP(benchmark::State& state) {
  const auto& e = models::find_entry("EX2");
  const representation::Representation rep(e.hamiltonian, e.lagrangian);
  bolza::BolzaSpec s;
  s.cost = bolza::EndpointCost::terminal(0.0, [](double x) { return ExtReal(std::abs(x)); });
  s.Nt = 25;
  s.Nx = 101;
  for (auto _ : state) benchmark::DoNotOptimize(bolza::solve_control(s, rep));
}
BENCHMARK(BM_ControlDP)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
