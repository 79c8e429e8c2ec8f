#include "tdg/taylor.hpp"

#include <cmath>
#include <stdexcept>

namespace tdg {

namespace {

constexpr Cx kI{0.0, 1.0};

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Cx ipow(Cx z, int n) {
  Cx r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

}  // namespace

std::vector<MultiIndex> multi_indices(int dim, int p) {
  std::vector<MultiIndex> idx;
  for (int jt = 0; jt <= p; ++jt) {
    if (dim == 1) {
      for (int jx = 0; jx <= p - jt; ++jx) idx.push_back({jx, 0, jt});
    } else {
      for (int jy = 0; jy <= p - jt; ++jy)
        for (int jx = 0; jx <= p - jt - jy; ++jx) idx.push_back({jx, jy, jt});
    }
  }
  return idx;
}

Eigen::VectorXcd basis_taylor_coeffs(const BasisSpec& basis, int l, double v,
                                     Point2 z, double s, int p) {
  const auto idx = multi_indices(basis.dim, p);
  const double kx = basis.k[l] * basis.dir[l].x;
  const double ky = basis.k[l] * basis.dir[l].y;
  const double omega = basis.k[l] * basis.k[l] + v;
  const Cx phi = eval_basis(basis, l, z, s, v, 0.0).value;

  Eigen::VectorXcd c(idx.size());
  for (size_t r = 0; r < idx.size(); ++r) {
    const MultiIndex& j = idx[r];
    Cx q = ipow(kI * kx, j.jx) * ipow(-kI * omega, j.jt) /
           (factorial(j.jx) * factorial(j.jt));
    if (basis.dim == 2) q *= ipow(kI * ky, j.jy) / factorial(j.jy);
    c[r] = q * phi;
  }
  return c;
}

Eigen::MatrixXcd taylor_matrix(const BasisSpec& basis, double v, Point2 z, double s, int p) {
  const int rows = static_cast<int>(multi_indices(basis.dim, p).size());
  Eigen::MatrixXcd m(rows, basis.size());
  for (int l = 0; l < basis.size(); ++l) m.col(l) = basis_taylor_coeffs(basis, l, v, z, s, p);
  return m;
}

RankResult check_rank(const BasisSpec& basis, double v, int p) {
  const Point2 probe{0.23, basis.dim == 2 ? -0.17 : 0.0};
  const Eigen::MatrixXcd m = taylor_matrix(basis, v, probe, 0.11, p);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  RankResult out;
  out.sigma_max = sv(0);
  out.sigma_min = sv(sv.size() - 1);
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * out.sigma_max) ++out.rank;
  const int expected = basis.dim == 1 ? 2 * p + 1 : (p + 1) * (p + 1);
  out.full_rank = out.rank == expected;
  return out;
}

double check_recurrence(const Eigen::VectorXcd& coeffs, double v, int dim, int p) {
  const auto idx = multi_indices(dim, p);
  if (coeffs.size() != static_cast<Eigen::Index>(idx.size()))
    throw std::invalid_argument("check_recurrence: coefficient count does not match p");
  auto find = [&](int jx, int jy, int jt) -> Cx {
    for (size_t r = 0; r < idx.size(); ++r)
      if (idx[r].jx == jx && idx[r].jy == jy && idx[r].jt == jt) return coeffs[r];
    throw std::logic_error("check_recurrence: index out of range");
  };
  double max_res = 0.0;
  for (const MultiIndex& j : idx) {
    if (j.total() > p - 2) continue;
    Cx lhs = kI * static_cast<double>(j.jt + 1) * find(j.jx, j.jy, j.jt + 1) +
             static_cast<double>((j.jx + 1) * (j.jx + 2)) * find(j.jx + 2, j.jy, j.jt);
    if (dim == 2)
      lhs += static_cast<double>((j.jy + 1) * (j.jy + 2)) * find(j.jx, j.jy + 2, j.jt);
    max_res = std::max(max_res, std::abs(lhs - v * find(j.jx, j.jy, j.jt)));
  }
  return max_res;
}

Eigen::MatrixXcd vandermonde_moment_matrix(const BasisSpec& basis, double v) {
  const int p = basis.p;
  const int n = 2 * p + 1;
  Eigen::MatrixXcd vm(n, basis.size());
  int row = 0;
  for (int jt = 0; jt <= p; ++jt)
    for (int jx = 0; jx <= std::min(1, p - jt); ++jx) {
      for (int l = 0; l < basis.size(); ++l) {
        const double k = basis.k[l] * basis.dir[l].x;
        const double omega = basis.k[l] * basis.k[l] + v;
        vm(row, l) = ipow(kI * k, jx) * ipow(-kI * omega, jt) /
                     (factorial(jx) * factorial(jt));
      }
      ++row;
    }
  return vm;
}

SFactors s_factors(const BasisSpec& basis, double v, int p) {
  const auto idx = multi_indices(2, p);
  const int rp = static_cast<int>(idx.size());
  const int n = basis.size();

  SFactors out;
  out.g.resize(rp, n);
  for (int l = 0; l < n; ++l) {
    const double kx = basis.k[l] * basis.dir[l].x;
    const double ky = basis.k[l] * basis.dir[l].y;
    const double omega = basis.k[l] * basis.k[l] + v;
    for (int r = 0; r < rp; ++r) {
      const MultiIndex& j = idx[r];
      out.g(r, l) = ipow(kI * kx, j.jx) * ipow(kI * ky, j.jy) * ipow(-kI * omega, j.jt) /
                    (factorial(j.jx) * factorial(j.jy) * factorial(j.jt));
    }
  }

  // S rows: (jX, jt) with jX = 0..p for the e^{+i theta} block and
  // jX = 1..p for the e^{-i theta} block.
  const int n2 = (p + 1) * (p + 2) / 2 + p * (p + 1) / 2;  // == (p+1)^2
  out.s.resize(n2, n);
  out.p_map = Eigen::MatrixXcd::Zero(n2, rp);
  int row = 0;
  for (int sign = +1; sign >= -1; sign -= 2) {
    for (int jX = sign > 0 ? 0 : 1; jX <= p; ++jX)
      for (int jt = 0; jt <= p - jX; ++jt) {
        for (int l = 0; l < n; ++l) {
          const double kx = basis.k[l] * basis.dir[l].x;
          const double ky = basis.k[l] * basis.dir[l].y;
          const double omega = basis.k[l] * basis.k[l] + v;
          const Cx kpm = sign > 0 ? Cx(kx, ky) : Cx(kx, -ky);
          out.s(row, l) = std::pow(omega, jt) * ipow(kpm, jX);
        }
        for (int r = 0; r < rp; ++r) {
          const MultiIndex& j = idx[r];
          if (j.jt != jt || j.jx + j.jy != jX) continue;
          Cx denom = ipow(kI, j.jx) * ipow(-kI, j.jt);
          if (sign < 0) denom *= ipow(Cx(-1.0, 0.0), j.jy);
          out.p_map(row, r) = factorial(jX) * factorial(jt) / denom;
        }
        ++row;
      }
  }
  return out;
}

MatchResult match_taylor(const BasisSpec& basis, double v, Point2 z, double s, int p,
                         const Eigen::VectorXcd& b) {
  const Eigen::MatrixXcd m = taylor_matrix(basis, v, z, s, p);
  if (b.size() != m.rows())
    throw std::invalid_argument("match_taylor: b has wrong length for degree p");

  MatchResult out;
  if (basis.dim == 1) {
    // rows with j_x in {0, 1}, in the (j_t, j_x) order of the V matrix
    const auto idx = multi_indices(1, p);
    std::vector<int> sq;
    for (int jt = 0; jt <= p; ++jt)
      for (int jx = 0; jx <= std::min(1, p - jt); ++jx)
        for (size_t r = 0; r < idx.size(); ++r)
          if (idx[r].jx == jx && idx[r].jt == jt) sq.push_back(static_cast<int>(r));
    Eigen::MatrixXcd m_sq(sq.size(), m.cols());
    Eigen::VectorXcd b_sq(sq.size());
    for (size_t i = 0; i < sq.size(); ++i) {
      m_sq.row(i) = m.row(sq[i]);
      b_sq(i) = b(sq[i]);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m_sq, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.sigma_min_square = svd.singularValues()(svd.singularValues().size() - 1);
    if (out.sigma_min_square < 1e-12 * svd.singularValues()(0))
      throw std::invalid_argument("match_taylor: inadmissible parameters, square subsystem singular");
    out.a = svd.solve(b_sq);
  } else {
    const SFactors f = s_factors(basis, v, p);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f.s, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.sigma_min_square = svd.singularValues()(svd.singularValues().size() - 1);
    if (out.sigma_min_square < 1e-12 * svd.singularValues()(0))
      throw std::invalid_argument("match_taylor: inadmissible parameters, S matrix singular");
    const Eigen::VectorXcd y = svd.solve(f.p_map * b);
    // a = D^{-1} y with D = diag(phi_l(z, s))
    out.a.resize(basis.size());
    for (int l = 0; l < basis.size(); ++l)
      out.a(l) = y(l) / eval_basis(basis, l, z, s, v, 0.0).value;
  }
  const double bn = std::max(b.norm(), 1e-300);
  out.residual = (m * out.a - b).norm() / bn;
  return out;
}

}  // namespace tdg
