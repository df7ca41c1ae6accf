#include "smectic/assembly.hpp"
#include "smectic/norms.hpp"
#include "smectic/quadrature.hpp"
#include "smectic/solver.hpp"

#include <benchmark/benchmark.h>

using namespace smectic;

namespace {

const Coefficients kDesk{1e-4, 10.0, 10.0};
const Eigen::Vector2d kNu(0.6, 0.8);

void BM_StructuredMesh(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_structured_mesh(n));
}
BENCHMARK(BM_StructuredMesh)->Arg(64)->Arg(256);

void BM_TriangleQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(triangle_quadrature(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TriangleQuadrature)->Arg(14)->Arg(20);

void BM_ArgyrisTabulation(benchmark::State& state) {
  const Mesh mesh = build_structured_mesh(8);
  const FunctionSpace space = FunctionSpace::argyris(mesh);
  const QuadratureRule rule = triangle_quadrature(14);
  int cell = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(space.evaluate(cell, rule.points, 2));
    cell = (cell + 1) % mesh.num_cells();
  }
}
BENCHMARK(BM_ArgyrisTabulation);

void BM_Assemble(benchmark::State& state, Method method, int degree) {
  const Mesh mesh = build_structured_mesh(static_cast<int>(state.range(0)));
  const auto part = assign_boundary(mesh, BoundarySpec::defaults());
  const auto ms = plane_wave(kDesk, kNu);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(method, mesh, part, {kDesk, degree, 0}, ms));
}
BENCHMARK_CAPTURE(BM_Assemble, argyris, Method::Argyris, 5)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Assemble, c0ip_k3, Method::C0IP, 3)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Assemble, mixed_k1, Method::Mixed, 1)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state, Method method, int degree) {
  const Mesh mesh = build_structured_mesh(static_cast<int>(state.range(0)));
  const auto part = assign_boundary(mesh, BoundarySpec::defaults());
  const auto ms = plane_wave(kDesk, kNu);
  const auto sys = assemble(method, mesh, part, {kDesk, degree, 0}, ms);
  const auto stages = elimination_stages(sys);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_direct(sys.matrix, sys.rhs, kResidualTolerance, stages));
  }
  state.counters["dofs"] = sys.dimension();
}
BENCHMARK_CAPTURE(BM_Solve, argyris, Method::Argyris, 5)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, c0ip_k3, Method::C0IP, 3)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, mixed_k1, Method::Mixed, 1)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Errors(benchmark::State& state) {
  const Mesh mesh = build_structured_mesh(16);
  const auto part = assign_boundary(mesh, BoundarySpec::defaults());
  const auto ms = plane_wave(kDesk, kNu);
  const auto sys = assemble(Method::Argyris, mesh, part, {kDesk, 5, 0}, ms);
  const Eigen::VectorXd x = interpolate_exact(sys, ms);
  for (auto _ : state) benchmark::DoNotOptimize(compute_errors(sys, x, ms, part));
}
BENCHMARK(BM_Errors)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
