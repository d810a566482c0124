#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "distmin/functionals.hpp"
#include "distmin/maps.hpp"
#include "distmin/minimizers.hpp"
#include "distmin/morphing.hpp"

namespace {

using namespace distmin;

constexpr double kPi = std::numbers::pi;

ClosedCurve circle(int n, double perimeter) {
    const double r = perimeter / (2.0 * n * std::sin(kPi / n));
    std::vector<Vec2> verts(n);
    for (int i = 0; i < n; ++i) {
        const double theta = 2.0 * kPi * i / n;
        verts[i] = r * Vec2(std::cos(theta), std::sin(theta));
    }
    return ClosedCurve::from_vertices(std::move(verts));
}

void BM_Phi2Curve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ClosedCurve c = circle(n, 2.0 * kPi);
    const ClosedCurve d = circle(n, 4.0 * kPi);
    const CurveMap h = random_monotone_map(c, d, 7);
    for (auto _ : state) benchmark::DoNotOptimize(phi2_curve(h).value);
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Phi2Curve)->Arg(256)->Arg(2048)->Arg(16384);

void BM_Phi2Mesh(benchmark::State& state) {
    const SurfaceMesh m = make_icosphere(static_cast<int>(state.range(0)));
    std::vector<Vec3> scaled(m.vertex_count());
    for (int i = 0; i < m.vertex_count(); ++i) scaled[i] = 1.3 * m.vertices()[i];
    const MeshMap h = MeshMap::from_meshes(
        m, SurfaceMesh::from_vertices_and_triangles(std::move(scaled), m.triangles()));
    for (auto _ : state) benchmark::DoNotOptimize(phi2_mesh(h).value);
    state.SetItemsProcessed(state.iterations() * m.triangle_count());
}
BENCHMARK(BM_Phi2Mesh)->Arg(2)->Arg(4);

void BM_ComposeCurveMaps(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ClosedCurve a = circle(n, 2.0 * kPi);
    const ClosedCurve b = circle(n, 3.0 * kPi);
    const ClosedCurve c = circle(n, 5.0);
    const CurveMap f = random_monotone_map(a, b, 1);
    const CurveMap g = random_monotone_map(b, c, 2);
    for (auto _ : state) benchmark::DoNotOptimize(compose_curve_maps(g, f));
}
BENCHMARK(BM_ComposeCurveMaps)->Arg(256)->Arg(2048);

void BM_InvertCurveMap(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ClosedCurve c = circle(n, 2.0 * kPi);
    const ClosedCurve d = circle(n, 9.0);
    const CurveMap h = random_monotone_map(c, d, 3);
    for (auto _ : state) benchmark::DoNotOptimize(invert_curve_map(h));
}
BENCHMARK(BM_InvertCurveMap)->Arg(256)->Arg(2048);

void BM_TimeOneMap(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ClosedCurve c = circle(n, 2.0 * kPi);
    std::vector<std::vector<double>> vals(11, std::vector<double>(n));
    for (int j = 0; j <= 10; ++j)
        for (int i = 0; i < n; ++i)
            vals[j][i] = 0.1 * std::sin(c.arc_table()[i]) * std::cos(kPi * j / 10.0);
    const TimeVectorField v = TimeVectorField::from_samples(c, std::move(vals));
    for (auto _ : state) benchmark::DoNotOptimize(time_one_map(v));
}
BENCHMARK(BM_TimeOneMap)->Arg(64)->Arg(256);

void BM_MinimizePhi2(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ClosedCurve c = circle(n, 2.0 * kPi);
    const ClosedCurve d = circle(n, 4.0 * kPi);
    OptimizerConfig cfg;
    for (auto _ : state) {
        const CurveMap init = random_monotone_map(c, d, 11);
        benchmark::DoNotOptimize(minimize_phi2_curve(c, d, init, cfg).trace.energies.size());
    }
}
BENCHMARK(BM_MinimizePhi2)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_PairwiseMinimalize(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<ClosedCurve> fs;
    for (int j = 0; j <= 16; ++j) {
        const double t = j / 16.0;
        std::vector<Vec2> verts(n);
        for (int i = 0; i < n; ++i) {
            const double theta = 2.0 * kPi * i / n;
            const double r = 1.0 + 0.5 * t * std::max(0.0, std::cos(theta));
            verts[i] = r * Vec2(std::cos(theta), std::sin(theta));
        }
        fs.push_back(ClosedCurve::from_vertices(std::move(verts)));
    }
    const Morph F = make_morph(std::move(fs));
    for (auto _ : state) benchmark::DoNotOptimize(pairwise_minimalize_curve(F).frame_count());
}
BENCHMARK(BM_PairwiseMinimalize)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_MinimizeXi(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    OptimizerConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(minimize_xi_numeric(2.0 * kPi, 4.0 * kPi, n, cfg).schedule);
}
BENCHMARK(BM_MinimizeXi)->Arg(64)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
