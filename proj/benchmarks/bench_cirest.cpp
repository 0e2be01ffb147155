#include <benchmark/benchmark.h>

#include "cirest/constants.hpp"
#include "cirest/diffquot.hpp"
#include "cirest/fem.hpp"
#include "cirest/lagrange.hpp"
#include "cirest/mesh.hpp"

using namespace cirest;

static void BM_TriangleMetrics(benchmark::State& state) {
    const Triangle t = example1_right(1e-3);
    for (auto _ : state) benchmark::DoNotOptimize(triangle_metrics(t));
}
BENCHMARK(BM_TriangleMetrics);

static void BM_InterpError(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    Rng rng(3);
    const Triangle t = random_triangle(rng);
    const BivariatePolynomial v = random_polynomial(rng, k + 2);
    for (auto _ : state) benchmark::DoNotOptimize(interp_error(v, k, 1, 2.0, t));
}
BENCHMARK(BM_InterpError)->DenseRange(1, 4);

static void BM_SupBoundRatioP2(benchmark::State& state) {
    const Triangle t = example1_left(1e-3);
    for (auto _ : state) benchmark::DoNotOptimize(sup_bound_ratio(2, 1, 2.0, t, 42, 16, 4));
}
BENCHMARK(BM_SupBoundRatioP2)->Unit(benchmark::kMillisecond);

static void BM_EstimateB(benchmark::State& state) {
    const Triangle t = squeezed_triangle(1.0, 0.01);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_B(1, 1, 2.0, t, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EstimateB)->Arg(6)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_IdentitySuite(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(identity_suite());
}
BENCHMARK(BM_IdentitySuite)->Unit(benchmark::kMillisecond);

static void BM_BuildMesh(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_aniso_mesh(n, 1.8));
}
BENCHMARK(BM_BuildMesh)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Assemble(benchmark::State& state) {
    const TriMesh mesh = build_aniso_mesh(32, 1.6);
    const PoissonProblem p = cylinder_problem();
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(assemble(mesh, k, p));
}
BENCHMARK(BM_Assemble)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_Solve(benchmark::State& state) {
    const TriMesh mesh = build_aniso_mesh(static_cast<int>(state.range(0)), 1.6);
    const SparseSystem sys = assemble(mesh, 1, cylinder_problem());
    for (auto _ : state) benchmark::DoNotOptimize(solve(sys));
}
BENCHMARK(BM_Solve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
