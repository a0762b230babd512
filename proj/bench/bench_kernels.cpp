// Serial reference kernels against the OpenMP ones. Set OMP_NUM_THREADS to
// compare thread counts; on a single core the two paths should be close.

#include <benchmark/benchmark.h>

#include <random>

#include "natconv/linear_solver.hpp"
#include "natconv/mms.hpp"
#include "natconv/newton.hpp"

using namespace natconv;

namespace {

CoupledState sample_state(const Mesh& m)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    std::vector<double> v(2 * m.num_interior());
    for (auto& x : v) {
        x = u(rng);
    }
    return unpack_interior(m, v);
}

void BM_TangentParallel(benchmark::State& st)
{
    const Mesh m = build_structured_mesh(static_cast<int>(st.range(0)));
    const CoupledState u = sample_state(m);
    for (auto _ : st) {
        benchmark::DoNotOptimize(assemble_tangent(u, 10.0, m));
    }
}

void BM_TangentSerial(benchmark::State& st)
{
    const Mesh m = build_structured_mesh(static_cast<int>(st.range(0)));
    const CoupledState u = sample_state(m);
    for (auto _ : st) {
        benchmark::DoNotOptimize(reference::assemble_tangent(u, 10.0, m));
    }
}

void BM_ResidualParallel(benchmark::State& st)
{
    const Mesh m = build_structured_mesh(static_cast<int>(st.range(0)));
    const CoupledState u = sample_state(m);
    const SourceLoads loads = assemble_source_loads(convection_benchmark().problem(10.0), m);
    for (auto _ : st) {
        benchmark::DoNotOptimize(assemble_residual(u, 10.0, loads, m));
    }
}

void BM_ResidualSerial(benchmark::State& st)
{
    const Mesh m = build_structured_mesh(static_cast<int>(st.range(0)));
    const CoupledState u = sample_state(m);
    const SourceLoads loads = reference::assemble_source_loads(convection_benchmark().problem(10.0), m);
    for (auto _ : st) {
        benchmark::DoNotOptimize(reference::assemble_residual(u, 10.0, loads, m));
    }
}

void BM_SpmvParallel(benchmark::State& st)
{
    const Mesh m = build_structured_mesh(static_cast<int>(st.range(0)));
    const SparseMatrix a = assemble_tangent(sample_state(m), 10.0, m);
    const std::vector<double> x(static_cast<std::size_t>(a.cols()), 1.0);
    for (auto _ : st) {
        benchmark::DoNotOptimize(spmv(a, x));
    }
}

void BM_SpmvSerial(benchmark::State& st)
{
    const Mesh m = build_structured_mesh(static_cast<int>(st.range(0)));
    const SparseMatrix a = assemble_tangent(sample_state(m), 10.0, m);
    const std::vector<double> x(static_cast<std::size_t>(a.cols()), 1.0);
    for (auto _ : st) {
        benchmark::DoNotOptimize(reference::spmv(a, x));
    }
}

void BM_BandedLU(benchmark::State& st)
{
    const Mesh m = build_structured_mesh(static_cast<int>(st.range(0)));
    const SparseMatrix a = assemble_tangent(sample_state(m), 10.0, m);
    for (auto _ : st) {
        BandedLU lu(a);
        benchmark::DoNotOptimize(lu.size());
    }
}

void BM_Newton(benchmark::State& st)
{
    const Mesh m = build_structured_mesh(static_cast<int>(st.range(0)));
    const ProblemParams p = convection_benchmark().problem(10.0);
    NewtonConfig c;
    c.execution = st.range(1) != 0 ? Execution::serial : Execution::parallel;
    for (auto _ : st) {
        benchmark::DoNotOptimize(newton_solve(CoupledState(m), p, m, c));
    }
}

}  // namespace

BENCHMARK(BM_TangentParallel)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TangentSerial)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResidualParallel)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResidualSerial)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpmvParallel)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SpmvSerial)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BandedLU)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Newton)->Args({32, 0})->Args({32, 1})->Args({64, 0})->Args({64, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
