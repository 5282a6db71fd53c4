#include <benchmark/benchmark.h>

#include <array>

#include "poromech/assembly.hpp"
#include "poromech/material_point.hpp"
#include "poromech/scenario.hpp"
#include "poromech/solver.hpp"

using namespace poromech;

namespace {

struct Case {
    io::BuiltProblem built;
    fem::Assembler as;
    Eigen::VectorXd x0;

    explicit Case(const std::string& preset, int refine = 1)
        : built(io::build_problem(io::preset(preset), refine)), as(built.problem), x0(as.initial_state(built.P0)) {}
};

void BM_PointTwoGas(benchmark::State& st) {
    const auto built = io::build_problem(io::preset("two_gas"));
    const auto F = Mat2<double>::identity();
    std::vector<double> P0 = built.P0;
    P0[1] *= 50.0;
    for (auto _ : st) benchmark::DoNotOptimize(constitutive::evaluate_point(built.problem.mixture, F, P0));
}
BENCHMARK(BM_PointTwoGas);

void BM_Residual(benchmark::State& st, const char* preset) {
    Case c(preset);
    for (auto _ : st) benchmark::DoNotOptimize(c.as.assemble_residual(c.x0, c.x0, 1.0));
    st.counters["dofs"] = c.as.n_dofs();
}
BENCHMARK_CAPTURE(BM_Residual, terzaghi, "terzaghi")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Residual, two_gas, "two_gas")->Unit(benchmark::kMillisecond);

void BM_Tangent(benchmark::State& st, const char* preset) {
    Case c(preset);
    for (auto _ : st) benchmark::DoNotOptimize(c.as.assemble_tangent(c.x0, c.x0, 1.0));
    st.counters["dofs"] = c.as.n_dofs();
}
BENCHMARK_CAPTURE(BM_Tangent, terzaghi, "terzaghi")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Tangent, two_gas, "two_gas")->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& st, const char* preset) {
    Case c(preset);
    const fem::SparseSystem sys = c.as.assemble_tangent(c.x0, c.x0, 1.0);
    for (auto _ : st) benchmark::DoNotOptimize(fem::solve_linear(sys));
    st.counters["dofs"] = c.as.n_dofs();
}
BENCHMARK_CAPTURE(BM_Solve, terzaghi, "terzaghi")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, two_gas, "two_gas")->Unit(benchmark::kMillisecond);

void BM_TimeStep(benchmark::State& st) {
    Case c("two_gas");
    solver::TimeIntegrator ti(c.as);
    const auto s0 = solver::initial_loop_state(c.as, c.built.P0);
    for (auto _ : st) benchmark::DoNotOptimize(ti.step(s0, 1.0));
}
BENCHMARK(BM_TimeStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
