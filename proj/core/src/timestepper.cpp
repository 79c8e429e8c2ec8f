#include "tdg/timestepper.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tdg {

namespace {

// One pass of row then column equilibration (infinity norms).
void equilibrate_dense(const Eigen::MatrixXcd& a, Eigen::VectorXd& r, Eigen::VectorXd& c,
                       Eigen::MatrixXcd& scaled) {
  const int n = static_cast<int>(a.rows());
  r = a.cwiseAbs().rowwise().maxCoeff();
  for (int i = 0; i < n; ++i) r[i] = r[i] > 0.0 ? 1.0 / r[i] : 1.0;
  scaled = r.asDiagonal() * a;
  c = scaled.cwiseAbs().colwise().maxCoeff();
  for (int j = 0; j < n; ++j) c[j] = c[j] > 0.0 ? 1.0 / c[j] : 1.0;
  scaled = scaled * c.asDiagonal();
}

void equilibrate_sparse(const Eigen::SparseMatrix<Cx>& a, Eigen::VectorXd& r,
                        Eigen::VectorXd& c, Eigen::SparseMatrix<Cx>& scaled) {
  const int n = static_cast<int>(a.rows());
  r = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<Cx>::InnerIterator it(a, k); it; ++it)
      r[it.row()] = std::max(r[it.row()], std::abs(it.value()));
  for (int i = 0; i < n; ++i) r[i] = r[i] > 0.0 ? 1.0 / r[i] : 1.0;
  c = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<Cx>::InnerIterator it(a, k); it; ++it)
      c[it.col()] = std::max(c[it.col()], r[it.row()] * std::abs(it.value()));
  for (int j = 0; j < n; ++j) c[j] = c[j] > 0.0 ? 1.0 / c[j] : 1.0;
  scaled = r.asDiagonal() * a * c.asDiagonal();
}

}  // namespace

Factorization::Factorization(const SlabSystem& system) : system_(&system) {
  if (system.dense) {
    Eigen::MatrixXcd scaled;
    equilibrate_dense(system.a_dense, row_scale_, col_scale_, scaled);
    const double max_a = scaled.cwiseAbs().maxCoeff();
    const int n = static_cast<int>(scaled.rows());
    dense_ext_ = system.a_dense.cast<Cld>();
    dense_lu_.compute(scaled.cast<Cld>());
    const auto& lu = dense_lu_.matrixLU();
    long double max_u = 0.0, min_piv = std::numeric_limits<long double>::infinity();
    for (int i = 0; i < n; ++i) {
      min_piv = std::min(min_piv, std::abs(lu(i, i)));
      for (int j = i; j < n; ++j) max_u = std::max(max_u, std::abs(lu(i, j)));
    }
    if (!(min_piv > 1e-300L * std::max<long double>(1.0L, max_u)))
      throw std::runtime_error("factorize: numerically singular slab matrix (pivot " +
                               std::to_string(static_cast<double>(min_piv)) + ")");
    rpg_ = max_u > 0.0L ? static_cast<double>(max_a / max_u) : 1.0;
  } else {
    equilibrate_sparse(system.a_sparse, row_scale_, col_scale_, scaled_sparse_);
    sparse_lu_ = std::make_unique<
        Eigen::SparseLU<Eigen::SparseMatrix<Cx>, Eigen::COLAMDOrdering<int>>>();
    sparse_lu_->isSymmetric(false);
    sparse_lu_->setPivotThreshold(1.0);  // plain partial pivoting
    sparse_lu_->compute(scaled_sparse_);
    if (sparse_lu_->info() != Eigen::Success)
      throw std::runtime_error("factorize: sparse LU failed (singular slab matrix?)");
    rpg_ = std::numeric_limits<double>::quiet_NaN();
  }
}

Factorization::VectorXcld Factorization::solve_scaled(const VectorXcld& b) const {
  return dense_lu_.solve(b);
}

Factorization::VectorXcld Factorization::solve_scaled_adjoint(const VectorXcld& b) const {
  // P A Q = L U gives A^H = Q U^H L^H P
  const auto& lu = dense_lu_.matrixLU();
  VectorXcld w = dense_lu_.permutationQ().inverse() * b;
  lu.triangularView<Eigen::Upper>().adjoint().solveInPlace(w);
  lu.triangularView<Eigen::UnitLower>().adjoint().solveInPlace(w);
  return dense_lu_.permutationP().inverse() * w;
}

Eigen::VectorXcd Factorization::solve_once(const Eigen::VectorXcd& b) const {
  const Eigen::VectorXcd rb = row_scale_.asDiagonal() * b;
  Eigen::VectorXcd y = system_->dense
                           ? Eigen::VectorXcd(solve_scaled(rb.cast<Cld>()).cast<Cx>())
                           : Eigen::VectorXcd(sparse_lu_->solve(rb));
  return col_scale_.asDiagonal() * y;
}

Eigen::VectorXcd Factorization::solve_once_adjoint(const Eigen::VectorXcd& b) const {
  // adjoint of D_r A D_c = D_c A^H D_r
  const Eigen::VectorXcd cb = col_scale_.asDiagonal() * b;
  Eigen::VectorXcd y = system_->dense
                           ? Eigen::VectorXcd(solve_scaled_adjoint(cb.cast<Cld>()).cast<Cx>())
                           : Eigen::VectorXcd(sparse_lu_->adjoint().solve(cb));
  return row_scale_.asDiagonal() * y;
}

Eigen::VectorXcd Factorization::solve(const Eigen::VectorXcd& b) const {
  const double bn = std::max(b.norm(), 1e-300);
  if (system_->dense) {
    // whole refinement loop in extended precision: the conditioning of the
    // finest-mesh slab matrices leaves no headroom in double
    VectorXcld x = col_scale_.cast<long double>().asDiagonal() *
                   solve_scaled((row_scale_.asDiagonal() * b).cast<Cld>());
    const VectorXcld bl = b.cast<Cld>();
    for (int it = 0; it < 3; ++it) {
      const VectorXcld r = bl - dense_ext_ * x;
      last_residual_ = static_cast<double>(r.norm()) / bn;
      if (last_residual_ < 1e-16) break;
      x += col_scale_.cast<long double>().asDiagonal() *
           solve_scaled(row_scale_.cast<long double>().asDiagonal() * r);
    }
    last_residual_ = static_cast<double>((bl - dense_ext_ * x).norm()) / bn;
    return x.cast<Cx>();
  }
  Eigen::VectorXcd x = solve_once(b);
  x += solve_once(b - system_->multiply(x));
  x += solve_once(b - system_->multiply(x));
  last_residual_ = (b - system_->multiply(x)).norm() / bn;
  return x;
}

Eigen::VectorXcd Factorization::solve_adjoint(const Eigen::VectorXcd& b) const {
  Eigen::VectorXcd x = solve_once_adjoint(b);
  Eigen::VectorXcd r = b - system_->multiply_adjoint(x);
  x += solve_once_adjoint(r);
  return x;
}

Factorization factorize(const SlabSystem& system) { return Factorization(system); }

Cx DiscreteSolution::eval_element(int elem, Point2 x, double t) const {
  const int slab = disc->mesh.slab_of(elem);
  Eigen::VectorXcd u;
  eval_basis_values(disc->basis, x, t, disc->element_potential(elem),
                    disc->mesh.time.knots[slab], u);
  const int nb = disc->basis.size();
  return u.transpose() * slab_coeffs[slab].segment(disc->mesh.cell_of(elem) * nb, nb);
}

WaveFunctionValue DiscreteSolution::eval_element_full(int elem, Point2 x, double t) const {
  const int slab = disc->mesh.slab_of(elem);
  const int cell = disc->mesh.cell_of(elem);
  const int nb = disc->basis.size();
  const auto coeffs = slab_coeffs[slab].segment(cell * nb, nb);
  WaveFunctionValue out;
  for (int l = 0; l < nb; ++l) {
    const WaveFunctionValue w = eval_basis(disc->basis, l, x, t, disc->element_potential(elem),
                                           disc->mesh.time.knots[slab]);
    out.value += coeffs[l] * w.value;
    out.gradient = out.gradient + coeffs[l] * w.gradient;
    out.time_derivative += coeffs[l] * w.time_derivative;
  }
  return out;
}

Cx DiscreteSolution::eval(Point2 x, double t) const {
  const SpaceTimeMesh& mesh = disc->mesh;
  int slab = 0;
  while (slab + 1 < mesh.n_slabs() && t > mesh.time.knots[slab + 1]) ++slab;
  if (t <= mesh.time.knots[0]) slab = 0;
  return eval_element(mesh.element(slab, mesh.space.locate(x)), x, t);
}

double DiscreteSolution::max_residual() const {
  double m = 0.0;
  for (double r : slab_residuals) m = std::max(m, r);
  return m;
}

DiscreteSolution march(const Discretization& disc, const ProblemSpec& problem,
                       const MarchOptions& options) {
  const SpaceTimeMesh& mesh = disc.mesh;
  const int n_slabs = mesh.n_slabs();
  const int nb = disc.basis.size();

  // matrix and trace-transfer reuse requires equal slab lengths
  double h_min = mesh.time.length(0);
  for (int n = 1; n < n_slabs; ++n) h_min = std::min(h_min, mesh.time.length(n));
  if (mesh.time.max_step() - h_min > 1e-12 * mesh.time.max_step())
    throw std::invalid_argument("march: non-uniform time slabs are not supported");

  const SlabSystem system = assemble_slab_matrix(disc, 0);
  const Factorization fact(system);

  DiscreteSolution sol;
  sol.disc = &disc;
  sol.slab_coeffs.reserve(n_slabs);
  sol.slab_residuals.reserve(n_slabs);

  // with uniform slabs the transfer blocks coincide for every interface
  std::vector<Eigen::MatrixXcd> transfer;
  if (n_slabs > 1) transfer = assemble_trace_transfer(disc, 1);

  for (int n = 0; n < n_slabs; ++n) {
    Eigen::VectorXcd rhs;
    if (n == 0) {
      rhs = assemble_initial_rhs(disc, problem.initial);
    } else {
      rhs.setZero(disc.dofs().dim());
      const Eigen::VectorXcd& prev = sol.slab_coeffs[n - 1];
      for (int c = 0; c < mesh.n_cells(); ++c)
        rhs.segment(c * nb, nb) = transfer[c] * prev.segment(c * nb, nb);
    }
    if (!problem.homogeneous_dirichlet)
      rhs += assemble_dirichlet_rhs(disc, n, problem.dirichlet);

    Eigen::VectorXcd x = fact.solve(rhs);
    const double res = fact.last_residual();
    if (res > options.abort_residual)
      throw std::runtime_error("march: slab " + std::to_string(n + 1) +
                               " relative residual " + std::to_string(res) +
                               " exceeds " + std::to_string(options.abort_residual) +
                               " (reciprocal pivot growth " +
                               std::to_string(fact.reciprocal_pivot_growth()) + ")");
    sol.slab_coeffs.push_back(std::move(x));
    sol.slab_residuals.push_back(res);
  }
  return sol;
}

double condition_number(const SlabSystem& system) {
  if (system.dense) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(system.a_dense);
    const auto& sv = svd.singularValues();
    return sv(0) / sv(sv.size() - 1);
  }
  const int n = system.dim;
  const Factorization fact(system);
  // power iteration on A^H A and on (A^H A)^{-1}
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(n).normalized();
  double sigma_max = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXcd y = system.multiply_adjoint(system.multiply(x));
    const double s = std::sqrt(y.norm());
    if (std::abs(s - sigma_max) <= 1e-3 * s && it > 3) {
      sigma_max = s;
      break;
    }
    sigma_max = s;
    x = y.normalized();
  }
  x = Eigen::VectorXcd::Ones(n).normalized();
  double inv_sigma_min = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXcd y = fact.solve_adjoint(fact.solve(x));
    const double s = std::sqrt(y.norm());
    if (std::abs(s - inv_sigma_min) <= 1e-3 * s && it > 3) {
      inv_sigma_min = s;
      break;
    }
    inv_sigma_min = s;
    x = y.normalized();
  }
  return sigma_max * inv_sigma_min;
}

}  // namespace tdg
