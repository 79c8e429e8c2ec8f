#include "tdg/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace tdg {

namespace {
constexpr Cx kI{0.0, 1.0};
}

double Discretization::v_span() const {
  double lo = cell_potential.empty() ? 0.0 : cell_potential[0];
  double hi = lo;
  for (double v : cell_potential) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

std::vector<FacePoint> Discretization::quad_points(const Face& face) const {
  const double k = basis.k_max();
  double space_rate = k;
  double time_rate = k * k + v_span();
  if (face.tag == FaceTag::Initial || face.tag == FaceTag::Dirichlet) {
    space_rate = std::max(space_rate, data_space_rate);
    time_rate = std::max(time_rate, data_time_rate);
  }
  return face_points(mesh, face, space_rate, time_rate, basis.p, quad);
}

Discretization make_discretization(const ProblemSpec& problem, SpaceTimeMesh mesh,
                                   BasisSpec basis, FluxParameters flux, QuadPolicy quad) {
  if (problem.dim != mesh.dim() || basis.dim != mesh.dim())
    throw std::invalid_argument("discretization: dimension mismatch");
  if (flux.alpha_scale <= 0.0 || flux.beta_scale <= 0.0)
    throw std::invalid_argument("discretization: flux scales must be positive");
  Discretization disc;
  disc.cell_potential = bind_potential(mesh.space, problem.potential);
  disc.mesh = std::move(mesh);
  disc.basis = std::move(basis);
  disc.flux = flux;
  disc.quad = quad;
  disc.data_space_rate = problem.data_space_rate;
  disc.data_time_rate = problem.data_time_rate;
  return disc;
}

Eigen::VectorXcd SlabSystem::multiply(const Eigen::VectorXcd& x) const {
  return dense ? Eigen::VectorXcd(a_dense * x) : Eigen::VectorXcd(a_sparse * x);
}

Eigen::VectorXcd SlabSystem::multiply_adjoint(const Eigen::VectorXcd& x) const {
  return dense ? Eigen::VectorXcd(a_dense.adjoint() * x)
               : Eigen::VectorXcd(a_sparse.adjoint() * x);
}

Cx SlabSystem::coeff(int row, int col) const {
  return dense ? a_dense(row, col) : a_sparse.coeff(row, col);
}

double SlabSystem::max_abs() const {
  if (dense) return a_dense.cwiseAbs().maxCoeff();
  double m = 0.0;
  for (int k = 0; k < a_sparse.outerSize(); ++k)
    for (Eigen::SparseMatrix<Cx>::InnerIterator it(a_sparse, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

namespace {

struct BlockAccumulator {
  int n_cells, n_basis;
  bool dense;
  Eigen::MatrixXcd a_dense;
  std::vector<Eigen::Triplet<Cx>> triplets;

  BlockAccumulator(int nc, int nb, bool dn) : n_cells(nc), n_basis(nb), dense(dn) {
    if (dense) a_dense = Eigen::MatrixXcd::Zero(nc * nb, nc * nb);
  }

  void add(int cell_row, int cell_col, const Eigen::MatrixXcd& block) {
    const int r0 = cell_row * n_basis, c0 = cell_col * n_basis;
    if (dense) {
      a_dense.block(r0, c0, n_basis, n_basis) += block;
    } else {
      for (int c = 0; c < n_basis; ++c)
        for (int r = 0; r < n_basis; ++r)
          triplets.emplace_back(r0 + r, c0 + c, block(r, c));
    }
  }
};

// Element traces of all basis functions at one quadrature point.
struct ElementTrace {
  const Eigen::VectorXcd* u;   // values
  const Eigen::VectorXcd* dn;  // grad . n (fixed reference normal)
};

}  // namespace

SlabSystem assemble_slab_matrix(const Discretization& disc, int slab) {
  const SpaceTimeMesh& mesh = disc.mesh;
  const BasisSpec& basis = disc.basis;
  const int nb = basis.size();
  const int nc = mesh.n_cells();
  const double t_start = mesh.time.knots[slab];
  const bool dense = mesh.dim() == 1;

  BlockAccumulator acc(nc, nb, dense);
  Eigen::VectorXcd u, dn, ua, ub, ga, gb;
  Eigen::MatrixXcd block(nb, nb);

  // Upwind self-term on the slab's top face (the F^T term on the last slab).
  const double t_top = mesh.time.knots[slab + 1];
  for (int fid : mesh.level_faces[slab + 1]) {
    const Face& face = mesh.faces[fid];
    const double v = disc.cell_potential[face.cell];
    block.setZero();
    for (const FacePoint& q : disc.quad_points(face)) {
      eval_basis_values(basis, q.x, t_top, v, t_start, u);
      block.noalias() += (kI * q.w) * (u.conjugate() * u.transpose());
    }
    acc.add(face.cell, face.cell, block);
  }

  Eigen::MatrixXcd blocks[2][2];
  for (int fid : mesh.slab_faces[slab]) {
    const Face& face = mesh.faces[fid];
    if (face.tag == FaceTag::TimeLike) {
      const int ca = mesh.cell_of(face.elem_a), cb = mesh.cell_of(face.elem_b);
      const double va = disc.cell_potential[ca], vb = disc.cell_potential[cb];
      const double alpha = disc.flux.alpha(face);
      const double beta = disc.flux.beta(face);
      for (auto& row : blocks)
        for (auto& b : row) b = Eigen::MatrixXcd::Zero(nb, nb);
      for (const FacePoint& q : disc.quad_points(face)) {
        eval_basis_values_dn(basis, q.x, q.t, va, t_start, face.normal, ua, ga);
        eval_basis_values_dn(basis, q.x, q.t, vb, t_start, face.normal, ub, gb);
        const ElementTrace tr[2] = {{&ua, &ga}, {&ub, &gb}};
        for (int b = 0; b < 2; ++b) {
          const double sb = b == 0 ? 1.0 : -1.0;
          for (int a = 0; a < 2; ++a) {
            const double sa = a == 0 ? 1.0 : -1.0;
            // {grad psi}.[conj s]_N + i a [psi]_N.[conj s]_N
            //   - {psi}[grad conj s]_N + i b [grad psi]_N [grad conj s]_N
            blocks[b][a].noalias() +=
                (0.5 * sb * q.w) * (tr[b].u->conjugate() * tr[a].dn->transpose());
            blocks[b][a].noalias() +=
                (kI * alpha * sa * sb * q.w) * (tr[b].u->conjugate() * tr[a].u->transpose());
            blocks[b][a].noalias() -=
                (0.5 * sb * q.w) * (tr[b].dn->conjugate() * tr[a].u->transpose());
            blocks[b][a].noalias() +=
                (kI * beta * sa * sb * q.w) * (tr[b].dn->conjugate() * tr[a].dn->transpose());
          }
        }
      }
      const int cells[2] = {ca, cb};
      for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a) acc.add(cells[b], cells[a], blocks[b][a]);
    } else {  // Dirichlet
      const int c = mesh.cell_of(face.elem_a);
      const double v = disc.cell_potential[c];
      const double alpha = disc.flux.alpha(face);
      block.setZero();
      for (const FacePoint& q : disc.quad_points(face)) {
        eval_basis_values_dn(basis, q.x, q.t, v, t_start, face.normal, u, dn);
        // (grad psi . n + i a psi) conj(s)
        block.noalias() += q.w * (u.conjugate() * dn.transpose());
        block.noalias() += (kI * alpha * q.w) * (u.conjugate() * u.transpose());
      }
      acc.add(c, c, block);
    }
  }

  SlabSystem sys;
  sys.dim = nc * nb;
  sys.dense = dense;
  if (dense) {
    sys.a_dense = std::move(acc.a_dense);
  } else {
    sys.a_sparse.resize(sys.dim, sys.dim);
    sys.a_sparse.setFromTriplets(acc.triplets.begin(), acc.triplets.end());
    sys.a_sparse.makeCompressed();
  }
  return sys;
}

std::vector<Eigen::MatrixXcd> assemble_trace_transfer(const Discretization& disc, int slab) {
  if (slab < 1) throw std::invalid_argument("trace transfer: slab must be >= 1");
  const SpaceTimeMesh& mesh = disc.mesh;
  const BasisSpec& basis = disc.basis;
  const int nb = basis.size();
  const double t_lvl = mesh.time.knots[slab];
  const double t_prev = mesh.time.knots[slab - 1];

  std::vector<Eigen::MatrixXcd> blocks(mesh.n_cells());
  Eigen::VectorXcd u_prev, u_cur;
  for (int fid : mesh.level_faces[slab]) {
    const Face& face = mesh.faces[fid];
    const double v_below = disc.element_potential(face.elem_a);
    const double v_above = disc.element_potential(face.elem_b);
    if (v_below != v_above)
      throw std::runtime_error("trace transfer: potential differs across a space-like face");
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(nb, nb);
    for (const FacePoint& q : disc.quad_points(face)) {
      eval_basis_values(basis, q.x, t_lvl, v_below, t_prev, u_prev);
      eval_basis_values(basis, q.x, t_lvl, v_above, t_lvl, u_cur);
      block.noalias() += (kI * q.w) * (u_cur.conjugate() * u_prev.transpose());
    }
    blocks[face.cell] = std::move(block);
  }
  return blocks;
}

Eigen::VectorXcd assemble_initial_rhs(const Discretization& disc,
                                      const std::function<Cx(Point2)>& psi0) {
  const SpaceTimeMesh& mesh = disc.mesh;
  const DofMap dofs = disc.dofs();
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dofs.dim());
  Eigen::VectorXcd u;
  for (int fid : mesh.level_faces[0]) {
    const Face& face = mesh.faces[fid];
    const double v = disc.cell_potential[face.cell];
    for (const FacePoint& q : disc.quad_points(face)) {
      eval_basis_values(disc.basis, q.x, 0.0, v, 0.0, u);
      const Cx c = kI * q.w * psi0(q.x);
      rhs.segment(dofs.index(face.cell, 0), dofs.n_basis) += c * u.conjugate();
    }
  }
  return rhs;
}

Eigen::VectorXcd assemble_dirichlet_rhs(const Discretization& disc, int slab,
                                        const std::function<Cx(Point2, double)>& g) {
  const SpaceTimeMesh& mesh = disc.mesh;
  const DofMap dofs = disc.dofs();
  const double t_start = mesh.time.knots[slab];
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dofs.dim());
  Eigen::VectorXcd u, dn;
  for (int fid : mesh.slab_faces[slab]) {
    const Face& face = mesh.faces[fid];
    if (face.tag != FaceTag::Dirichlet) continue;
    const int c = mesh.cell_of(face.elem_a);
    const double v = disc.cell_potential[c];
    const double alpha = disc.flux.alpha(face);
    for (const FacePoint& q : disc.quad_points(face)) {
      eval_basis_values_dn(disc.basis, q.x, q.t, v, t_start, face.normal, u, dn);
      const Cx gd = g(q.x, q.t);
      // g_D (grad conj(s) . n + i alpha conj(s))
      rhs.segment(dofs.index(c, 0), dofs.n_basis) +=
          (q.w * gd) * (dn.conjugate() + kI * alpha * u.conjugate());
    }
  }
  return rhs;
}

Cx apply_global_form(const Discretization& disc,
                     const std::vector<Eigen::VectorXcd>& trial,
                     const std::vector<Eigen::VectorXcd>& test) {
  const int n_slabs = disc.mesh.n_slabs();
  if (static_cast<int>(trial.size()) != n_slabs || static_cast<int>(test.size()) != n_slabs)
    throw std::invalid_argument("apply_global_form: need one coefficient vector per slab");

  Cx sum = 0.0;
  const SlabSystem a = assemble_slab_matrix(disc, 0);
  for (int n = 0; n < n_slabs; ++n) sum += test[n].dot(a.multiply(trial[n]));
  // cross-slab part of the F^space integral: -i INT psi^-(t_n) conj(s^+(t_n))
  for (int n = 1; n < n_slabs; ++n) {
    const auto transfer = assemble_trace_transfer(disc, n);
    for (int c = 0; c < disc.mesh.n_cells(); ++c) {
      const int nb = disc.basis.size();
      sum -= test[n].segment(c * nb, nb).dot(transfer[c] * trial[n - 1].segment(c * nb, nb));
    }
  }
  return sum;
}

Cx apply_global_functional(const Discretization& disc, const ProblemSpec& problem,
                           const std::vector<Eigen::VectorXcd>& test) {
  const int n_slabs = disc.mesh.n_slabs();
  Cx sum = test[0].dot(assemble_initial_rhs(disc, problem.initial));
  for (int n = 0; n < n_slabs; ++n)
    sum += test[n].dot(assemble_dirichlet_rhs(disc, n, problem.dirichlet));
  return sum;
}

void dump_slab_matrix(const SlabSystem& system, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  if (system.dense) {
    for (int r = 0; r < system.a_dense.rows(); ++r)
      for (int c = 0; c < system.a_dense.cols(); ++c) {
        const Cx v = system.a_dense(r, c);
        if (v != 0.0) std::fprintf(f, "%d %d %.16e %.16e\n", r, c, v.real(), v.imag());
      }
  } else {
    for (int k = 0; k < system.a_sparse.outerSize(); ++k)
      for (Eigen::SparseMatrix<Cx>::InnerIterator it(system.a_sparse, k); it; ++it)
        std::fprintf(f, "%ld %ld %.16e %.16e\n", static_cast<long>(it.row()),
                     static_cast<long>(it.col()), it.value().real(), it.value().imag());
  }
  std::fclose(f);
}

}  // namespace tdg
