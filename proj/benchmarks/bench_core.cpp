#include "llgmid/integrator.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <memory>

using namespace llgmid;

namespace {

const System& shared_system(int N) {
    static std::map<int, std::pair<std::unique_ptr<Mesh>, std::unique_ptr<MaterialModel>>> parts;
    static std::map<int, std::unique_ptr<System>> systems;
    if (!systems.count(N)) {
        auto mesh = std::make_unique<Mesh>(build_unit_cube_mesh(N));
        auto model = std::make_unique<MaterialModel>(exchange_only(1.0));
        auto sys = std::make_unique<System>(prepare_system(*mesh, *model));
        parts[N] = {std::move(mesh), std::move(model)};
        systems[N] = std::move(sys);
    }
    return *systems[N];
}

void BM_BuildMesh(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const Mesh mesh = build_unit_cube_mesh(N);
        benchmark::DoNotOptimize(mesh.volumes.data());
    }
}
BENCHMARK(BM_BuildMesh)->Arg(4)->Arg(8)->Arg(16);

void BM_AssembleLocalForm(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const Mesh mesh = build_unit_cube_mesh(N);
    const MaterialModel model = exchange_dmi(1.0, 0.5);
    for (auto _ : state) {
        const SparseBlockMatrix a = assemble_local_form(mesh, model);
        benchmark::DoNotOptimize(a.rows());
    }
}
BENCHMARK(BM_AssembleLocalForm)->Arg(8)->Arg(16);

void BM_LocalFormApply(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const System& sys = shared_system(N);
    const NodalField u = hedgehog_initial(*sys.mesh);
    std::vector<Vec3> out;
    for (auto _ : state) {
        sys.aloc.apply(u.values, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_LocalFormApply)->Arg(8)->Arg(16);

void BM_FixedPointStep(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const System& sys = shared_system(N);
    const NodalField m0 = hedgehog_initial(*sys.mesh);
    const double k = 0.08 / (N * N);  // well inside the feasible region
    for (auto _ : state) {
        const StepResult r = midpoint_step(sys, m0, m0, k, SchemeMode::fixed_point(1e-8));
        benchmark::DoNotOptimize(r.report.iterations);
    }
}
BENCHMARK(BM_FixedPointStep)->Arg(8)->Arg(16);

void BM_NewtonStep(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const System& sys = shared_system(N);
    const NodalField m0 = hedgehog_initial(*sys.mesh);
    const double k = 0.08 / (N * N);
    for (auto _ : state) {
        const StepResult r = midpoint_step(sys, m0, m0, k, SchemeMode::newton(1e-8));
        benchmark::DoNotOptimize(r.report.iterations);
    }
}
BENCHMARK(BM_NewtonStep)->Arg(8)->Arg(16);

void BM_Energy(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const System& sys = shared_system(N);
    const NodalField m0 = hedgehog_initial(*sys.mesh);
    for (auto _ : state) benchmark::DoNotOptimize(sys.energy(m0));
}
BENCHMARK(BM_Energy)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
