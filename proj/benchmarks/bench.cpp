#include <benchmark/benchmark.h>

#include "blochhom/pipelines.hpp"

using namespace blochhom;

namespace {

const CoefficientProfile kA = CoefficientProfile::sine(1.0, 2.0);
const CoefficientProfile kOne = CoefficientProfile::constant(1.0);

void BM_AssembleCell(benchmark::State& state) {
  const Mesh1D mesh = Mesh1D::unit_cell(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto p = assemble(mesh, kA, kOne, BoundaryTreatment::quasi_periodic(0.16));
    benchmark::DoNotOptimize(p.stiffness);
  }
}
BENCHMARK(BM_AssembleCell)->Arg(50)->Arg(200)->Arg(1000);

void BM_SolveCell(benchmark::State& state) {
  for (auto _ : state) {
    auto s = solve_cell(kA, kOne, 0.16, static_cast<int>(state.range(0)), 10);
    benchmark::DoNotOptimize(s.eigenvalues);
  }
}
BENCHMARK(BM_SolveCell)->Arg(50)->Arg(200);

void BM_SolvePhysicalBanded(benchmark::State& state) {
  PhysicalProblem problem;
  problem.epsilon = 0.02;
  problem.a = kA;
  problem.n_elements = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto s = solve_physical(problem, ModeRange{1, 20});
    benchmark::DoNotOptimize(s.eigenvalues);
  }
}
BENCHMARK(BM_SolvePhysicalBanded)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_BuildTwoScaleMode(benchmark::State& state) {
  const auto kd = prepare_cell(kA, kOne, 0.16, 50, 4);
  const Mesh1D mesh(0.0, 1.0, static_cast<int>(state.range(0)));
  const cplx c = kd.c_diag[1];
  const cplx d = cplx(0.0, 1.0) / kd.phi0[1];
  for (auto _ : state) {
    auto mode = assemble_pair_mode(kd.spectrum, 1, d, -58.9 / c, 58.9, 17, 0.02, mesh);
    benchmark::DoNotOptimize(mode.samples);
  }
}
BENCHMARK(BM_BuildTwoScaleMode)->Arg(2000);

void BM_TwoScaleTransform(benchmark::State& state) {
  const Mesh1D mesh(0.0, 1.0, 2000);
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(mesh.node_count());
  const auto u = FEFunction::from_node_values(mesh, v);
  for (auto _ : state) {
    auto f = two_scale_transform(u, 0.16, 0.02);
    benchmark::DoNotOptimize(f.values);
  }
}
BENCHMARK(BM_TwoScaleTransform);

}  // namespace

BENCHMARK_MAIN();
