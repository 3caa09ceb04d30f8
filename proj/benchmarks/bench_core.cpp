#include <benchmark/benchmark.h>

#include "osgs/assembly.hpp"
#include "osgs/driver.hpp"
#include "osgs/estimators.hpp"
#include "osgs/problem.hpp"
#include "osgs/solver.hpp"

namespace {

void BM_AssemblePrimal(benchmark::State& state) {
  const auto problem = osgs::builtin_example("ex3");
  const auto mesh = osgs::build_square_mesh(static_cast<int>(state.range(0)));
  osgs::AssemblyOptions options;
  options.threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto system = osgs::assemble_primal(mesh, problem, {}, options);
    benchmark::DoNotOptimize(system.K);
  }
  state.SetItemsProcessed(state.iterations() * mesh.n_elements());
}
BENCHMARK(BM_AssemblePrimal)->Args({64, 1})->Args({64, 4})->Args({128, 1});

void BM_MonolithicSolve(benchmark::State& state) {
  const auto problem = osgs::builtin_example("ex3");
  const auto mesh = osgs::build_square_mesh(static_cast<int>(state.range(0)));
  const auto system = osgs::assemble_primal(mesh, problem);
  const auto A = osgs::monolithic_matrix(system);
  const auto b = osgs::monolithic_rhs(system);
  for (auto _ : state) {
    auto report = osgs::solve_sparse(A, b);
    benchmark::DoNotOptimize(report.x);
  }
}
BENCHMARK(BM_MonolithicSolve)->Arg(32)->Arg(64);

void BM_CondensedSolve(benchmark::State& state) {
  const auto problem = osgs::builtin_example("ex3");
  const auto mesh = osgs::build_square_mesh(static_cast<int>(state.range(0)));
  const auto system = osgs::assemble_primal(mesh, problem);
  const auto reduced = osgs::condense_lumped(system);
  for (auto _ : state) {
    auto report = osgs::solve_sparse(reduced.A, reduced.b);
    benchmark::DoNotOptimize(report.x);
  }
}
BENCHMARK(BM_CondensedSolve)->Arg(32)->Arg(64);

void BM_Estimators(benchmark::State& state) {
  const auto problem = osgs::builtin_example("ex3");
  const int n = static_cast<int>(state.range(0));
  const auto mesh = osgs::build_square_mesh(n);
  osgs::RunOptions options;
  const auto primal = osgs::solve_field(mesh, problem, osgs::EquationKind::Primal, {}, options);
  const auto dual = osgs::solve_field(mesh, problem, osgs::EquationKind::Dual, {}, options);
  for (auto _ : state) {
    auto eta1 = osgs::eta1_field(mesh, problem, primal, {}, {});
    auto eta2 = osgs::eta2_field(mesh, problem, primal, dual, {}, {});
    benchmark::DoNotOptimize(eta1.total);
    benchmark::DoNotOptimize(eta2.total);
  }
  state.SetItemsProcessed(state.iterations() * mesh.n_elements());
}
BENCHMARK(BM_Estimators)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
