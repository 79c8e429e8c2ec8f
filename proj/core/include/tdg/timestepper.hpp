#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "tdg/assembly.hpp"

namespace tdg {

/// LU factorization of a slab matrix with row/column equilibration and
/// iterative refinement. The dense (1d) path pivots fully and carries the
/// factors in extended precision: the slab matrices reach condition numbers
/// ~1e14 on the finest meshes, where plain double LU loses the solution.
/// Sparse (2d) systems use SparseLU with partial pivoting. Keeps a reference
/// to the system; the SlabSystem must outlive the factorization.
class Factorization {
 public:
  using Cld = std::complex<long double>;
  using MatrixXcld = Eigen::Matrix<Cld, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorXcld = Eigen::Matrix<Cld, Eigen::Dynamic, 1>;

  explicit Factorization(const SlabSystem& system);

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;
  Eigen::VectorXcd solve_adjoint(const Eigen::VectorXcd& b) const;

  /// ||Ax - b|| / ||b|| of the last solve (after refinement).
  double last_residual() const { return last_residual_; }
  /// max|scaled A| / max|U|; quiet NaN for the sparse path.
  double reciprocal_pivot_growth() const { return rpg_; }

 private:
  const SlabSystem* system_;
  Eigen::VectorXd row_scale_, col_scale_;
  Eigen::FullPivLU<MatrixXcld> dense_lu_;
  MatrixXcld dense_ext_;  // unscaled matrix, for extended-precision residuals
  Eigen::SparseMatrix<Cx> scaled_sparse_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<Cx>, Eigen::COLAMDOrdering<int>>> sparse_lu_;
  double rpg_ = 0.0;
  mutable double last_residual_ = 0.0;

  VectorXcld solve_scaled(const VectorXcld& b) const;
  VectorXcld solve_scaled_adjoint(const VectorXcld& b) const;
  Eigen::VectorXcd solve_once(const Eigen::VectorXcd& b) const;
  Eigen::VectorXcd solve_once_adjoint(const Eigen::VectorXcd& b) const;
};

Factorization factorize(const SlabSystem& system);

/// Space-time discrete solution: one coefficient vector per slab.
struct DiscreteSolution {
  const Discretization* disc = nullptr;
  std::vector<Eigen::VectorXcd> slab_coeffs;
  std::vector<double> slab_residuals;

  Cx eval_element(int elem, Point2 x, double t) const;
  WaveFunctionValue eval_element_full(int elem, Point2 x, double t) const;
  /// Point evaluation; slab boundaries take the trace from below.
  Cx eval(Point2 x, double t) const;
  double max_residual() const;
};

struct MarchOptions {
  double abort_residual = 1e-6;
};

/// Solves the slab sequence with one reused factorization: slab 1 driven by
/// psi_0, slab n by the outgoing trace of slab n-1.
DiscreteSolution march(const Discretization& disc, const ProblemSpec& problem,
                       const MarchOptions& options = {});

/// Spectral condition number: exact (dense SVD) for 1d systems, a
/// power/inverse-power estimate for sparse ones.
double condition_number(const SlabSystem& system);

}  // namespace tdg
