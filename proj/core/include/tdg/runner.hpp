#pragma once

#include <string>
#include <vector>

#include "tdg/analysis.hpp"

namespace tdg {

/// Batch configuration shared by the convergence and solve drivers.
struct RunConfig {
  std::string benchmark = "square-well";  // or "gaussian"
  double v_star = 20.0;
  std::vector<int> p_list{1};
  std::vector<int> divisions{20};
  double ht_ratio = 0.25;  // h_t ~ ht_ratio * h_x
  KMode k_mode = KMode::Equispaced;
  double k_star = 0.0;  // tuned mode; 0 = use the bound-state wavenumber
  int quad_override = 0;
  double alpha_scale = 1.0;
  double beta_scale = 1.0;
  std::string out_dir = ".";
  unsigned seed = 1234;
  CellShape shape_2d = CellShape::SplitTriangles;
  int solve_samples = 101;  // per spatial axis in the sample CSV
  bool with_condition_number = true;
};

void validate_config(const RunConfig& config);

ProblemSpec benchmark_problem(const RunConfig& config);

/// Mesh for one refinement level: `divisions` cells per axis, slab count
/// from round(T / (ht_ratio * h_x)).
SpaceTimeMesh benchmark_mesh(const RunConfig& config, const ProblemSpec& problem, int divisions);

BasisSpec benchmark_basis(const RunConfig& config, const ProblemSpec& problem, int p);

Discretization benchmark_discretization(const RunConfig& config, const ProblemSpec& problem,
                                        int p, int divisions);

/// One full pipeline execution (mesh, assemble, march, errors).
RunRecord run_single(const RunConfig& config, const ProblemSpec& problem, int p, int divisions);

/// The h-convergence study: one run per (p, level), rates per p; writes
/// <out_dir>/convergence.csv. Keeps partial results if a run aborts.
ErrorReport run_convergence(const RunConfig& config);

/// Single run; samples Re/Im psi_hp on a uniform grid into
/// <out_dir>/solution.csv.
void run_solve(const RunConfig& config);

std::string convergence_csv_path(const RunConfig& config);
std::string solution_csv_path(const RunConfig& config);

}  // namespace tdg
