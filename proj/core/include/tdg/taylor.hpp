#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tdg/basis.hpp"

namespace tdg {

/// Space-time multi-index (j_x, j_y, j_t); j_y = 0 in one space dimension.
struct MultiIndex {
  int jx = 0, jy = 0, jt = 0;
  int total() const { return jx + jy + jt; }
};

/// All multi-indices |j| <= p in a fixed order: by j_t, then j_y, then j_x.
std::vector<MultiIndex> multi_indices(int dim, int p);

/// Taylor coefficients (1/j!) D^j phi_l at (z, s) of one basis function,
/// in closed form, ordered like multi_indices(dim, p). The basis is anchored
/// at t = 0.
Eigen::VectorXcd basis_taylor_coeffs(const BasisSpec& basis, int l, double v,
                                     Point2 z, double s, int p);

/// The Taylor-coefficient matrix M with M(:, l) = basis_taylor_coeffs(l).
Eigen::MatrixXcd taylor_matrix(const BasisSpec& basis, double v, Point2 z, double s, int p);

struct RankResult {
  bool full_rank = false;
  int rank = 0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

/// Numerical rank of M (threshold 1e-10 sigma_max) against the expected
/// dimension 2p+1 (d=1) or (p+1)^2 (d=2).
RankResult check_rank(const BasisSpec& basis, double v, int p);

/// Max residual of the coefficient recurrences
///   i (j_t+1) C_{j_x,(j_t+1)} + (j_x+1)(j_x+2) C_{(j_x+2),j_t}
///     [+ (j_y+1)(j_y+2) C_{j_x,(j_y+2),j_t}] = V C_j    over |j| <= p-2,
/// satisfied exactly by the Taylor data of any local solution.
double check_recurrence(const Eigen::VectorXcd& coeffs, double v, int dim, int p);

struct MatchResult {
  Eigen::VectorXcd a;
  double residual = 0.0;          // ||M a - b|| / ||b||, the full system
  double sigma_min_square = 0.0;  // smallest singular value of the square subsystem
};

/// Solves M a = b through the constructive square subsystem (rows j_x < 2
/// for d=1; the S = P G system for d=2) and reports the residual of the full
/// rectangular system. b holds the Taylor coefficients of the target.
MatchResult match_taylor(const BasisSpec& basis, double v, Point2 z, double s, int p,
                         const Eigen::VectorXcd& b);

/// d=1 square subsystem factors M_sq = V D with D = diag(phi_l(z,s)):
/// the matrix of polynomial moments q(k_l) and the unimodular diagonal.
Eigen::MatrixXcd vandermonde_moment_matrix(const BasisSpec& basis, double v);

/// d=2 constructive factors: S = P G with M = G D.
struct SFactors {
  Eigen::MatrixXcd s;  // (p+1)^2 square
  Eigen::MatrixXcd p_map;
  Eigen::MatrixXcd g;
};
SFactors s_factors(const BasisSpec& basis, double v, int p);

}  // namespace tdg
