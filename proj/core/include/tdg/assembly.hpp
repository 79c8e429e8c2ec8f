#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "tdg/basis.hpp"
#include "tdg/mesh.hpp"
#include "tdg/problems.hpp"
#include "tdg/quadrature.hpp"

namespace tdg {

/// Stabilization parameters alpha = 1/h_F, beta = h_F on the spatial
/// skeleton, with optional scaling (both scales must stay positive).
struct FluxParameters {
  double alpha_scale = 1.0;
  double beta_scale = 1.0;

  double alpha(const Face& f) const { return alpha_scale / f.h_fx; }
  double beta(const Face& f) const { return beta_scale * f.h_fx; }
};

/// Element-major ordering of the unknowns of one slab.
struct DofMap {
  int n_cells = 0;
  int n_basis = 0;

  int dim() const { return n_cells * n_basis; }
  int index(int cell, int l) const { return cell * n_basis + l; }
  std::pair<int, int> unflatten(int i) const { return {i / n_basis, i % n_basis}; }
};

/// Everything the assembly, the marching and the error evaluation share:
/// mesh, basis, per-cell potential and the quadrature policy.
struct Discretization {
  SpaceTimeMesh mesh;
  BasisSpec basis;
  std::vector<double> cell_potential;
  FluxParameters flux;
  QuadPolicy quad;
  double data_space_rate = 0.0;  // extra resolution on F^0 and F^D, from the problem data
  double data_time_rate = 0.0;

  DofMap dofs() const { return {mesh.n_cells(), basis.size()}; }
  double v_span() const;
  double element_potential(int elem) const { return cell_potential[mesh.cell_of(elem)]; }
  double element_t_start(int elem) const { return mesh.time.knots[mesh.slab_of(elem)]; }

  std::vector<FacePoint> quad_points(const Face& face) const;
};

Discretization make_discretization(const ProblemSpec& problem, SpaceTimeMesh mesh,
                                   BasisSpec basis, FluxParameters flux = {},
                                   QuadPolicy quad = {});

/// One time-slab system. Dense storage in 1d, block-sparse in 2d; with the
/// time-translated basis the matrix is the same for every slab.
struct SlabSystem {
  int dim = 0;
  bool dense = true;
  Eigen::MatrixXcd a_dense;
  Eigen::SparseMatrix<Cx> a_sparse;

  Eigen::VectorXcd multiply(const Eigen::VectorXcd& x) const;
  Eigen::VectorXcd multiply_adjoint(const Eigen::VectorXcd& x) const;
  Cx coeff(int row, int col) const;
  double max_abs() const;
};

/// Assembles the slab-local part of the variational form: the upwind trace
/// term on the slab's top face plus the time-like and Dirichlet flux terms.
SlabSystem assemble_slab_matrix(const Discretization& disc, int slab = 0);

/// Per-cell blocks of the trace-transfer operator feeding slab n with the
/// outgoing trace of slab n-1: C[m,l] = i INT phi_l(., t_n^-) conj(phi_m(., t_n^+)).
std::vector<Eigen::MatrixXcd> assemble_trace_transfer(const Discretization& disc, int slab);

/// Right-hand side from the initial datum, INT i psi_0 conj(s) over F^0.
Eigen::VectorXcd assemble_initial_rhs(const Discretization& disc,
                                      const std::function<Cx(Point2)>& psi0);

/// Dirichlet-data contribution of one slab,
/// INT g_D (grad conj(s) . n + i alpha conj(s)) over F^D.
Eigen::VectorXcd assemble_dirichlet_rhs(const Discretization& disc, int slab,
                                        const std::function<Cx(Point2, double)>& g);

/// The full space-time sesquilinear form A(trial, test), reconstituted from
/// the slab systems and the cross-slab coupling. Property tests only; the
/// solver path never calls this.
Cx apply_global_form(const Discretization& disc,
                     const std::vector<Eigen::VectorXcd>& trial,
                     const std::vector<Eigen::VectorXcd>& test);

/// The load functional l(test) of the full space-time problem.
Cx apply_global_functional(const Discretization& disc, const ProblemSpec& problem,
                           const std::vector<Eigen::VectorXcd>& test);

/// Writes the slab matrix as "row col re im" lines (text coordinate format).
void dump_slab_matrix(const SlabSystem& system, const std::string& path);

}  // namespace tdg
