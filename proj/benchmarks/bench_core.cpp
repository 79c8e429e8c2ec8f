#include <benchmark/benchmark.h>

#include "tdg/analysis.hpp"
#include "tdg/timestepper.hpp"

using namespace tdg;

namespace {

Discretization well_disc(int cells, int slabs, int p) {
  static ProblemSpec prob = square_well_problem(20.0);
  SpaceTimeMesh mesh =
      build_mesh(prob.bounds, cells, 1, slabs, prob.final_time, CellShape::Interval);
  return make_discretization(prob, std::move(mesh), default_basis(1, p, KMode::Equispaced));
}

Discretization gaussian_disc(int div, int slabs, int p) {
  static ProblemSpec prob = gaussian_problem();
  SpaceTimeMesh mesh =
      build_mesh(prob.bounds, div, div, slabs, prob.final_time, CellShape::SplitTriangles);
  return make_discretization(prob, std::move(mesh), default_basis(2, p, KMode::Equispaced));
}

void BM_BasisEval(benchmark::State& state) {
  BasisSpec b = default_basis(2, static_cast<int>(state.range(0)), KMode::Equispaced);
  Eigen::VectorXcd u;
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-6;
    eval_basis_values(b, {0.3, -0.2}, 0.7 + t, 5.0, 0.5, u);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_BasisEval)->Arg(1)->Arg(2)->Arg(3);

void BM_AssembleSlab1d(benchmark::State& state) {
  Discretization disc = well_disc(static_cast<int>(state.range(0)), 4, 2);
  for (auto _ : state) {
    SlabSystem sys = assemble_slab_matrix(disc, 0);
    benchmark::DoNotOptimize(sys.a_dense.data());
  }
}
BENCHMARK(BM_AssembleSlab1d)->Arg(20)->Arg(40)->Arg(80);

void BM_AssembleSlab2d(benchmark::State& state) {
  Discretization disc = gaussian_disc(static_cast<int>(state.range(0)), 2, 2);
  for (auto _ : state) {
    SlabSystem sys = assemble_slab_matrix(disc, 0);
    benchmark::DoNotOptimize(sys.a_sparse.valuePtr());
  }
}
BENCHMARK(BM_AssembleSlab2d)->Arg(5)->Arg(10)->Arg(15);

void BM_FactorizeDense(benchmark::State& state) {
  Discretization disc = well_disc(static_cast<int>(state.range(0)), 4, 2);
  SlabSystem sys = assemble_slab_matrix(disc, 0);
  for (auto _ : state) {
    Factorization f(sys);
    benchmark::DoNotOptimize(&f);
  }
}
BENCHMARK(BM_FactorizeDense)->Arg(20)->Arg(40)->Arg(80);

void BM_MarchSquareWell(benchmark::State& state) {
  static ProblemSpec prob = square_well_problem(20.0);
  Discretization disc =
      well_disc(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), 2);
  for (auto _ : state) {
    DiscreteSolution sol = march(disc, prob);
    benchmark::DoNotOptimize(sol.slab_coeffs.data());
  }
}
BENCHMARK(BM_MarchSquareWell)->Arg(20)->Arg(40);

void BM_DgError(benchmark::State& state) {
  static ProblemSpec prob = square_well_problem(20.0);
  Discretization disc = well_disc(20, 20, 2);
  DiscreteSolution sol = march(disc, prob);
  for (auto _ : state) {
    NormComponents nc = dg_error(disc, *prob.exact, sol);
    benchmark::DoNotOptimize(nc.dg_sq());
  }
}
BENCHMARK(BM_DgError);

}  // namespace

BENCHMARK_MAIN();
