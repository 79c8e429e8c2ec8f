#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tdg/types.hpp"

namespace tdg {

/// Value, spatial gradient and time derivative of one wave function.
struct WaveFunctionValue {
  Cx value{};
  Cvec2 gradient{};
  Cx time_derivative{};
};

enum class KMode { Equispaced, Tuned };

/// Parameters of the local complex-exponential basis
///   phi_l(x,t) = exp(i (k_l d_l . x - (k_l^2 + V)(t - t_start))),
/// shared by every element; V and t_start are supplied per element at
/// evaluation time. In 2d the functions are grouped by wavenumber: group[l]
/// = m means k[l] is the m-th wavenumber with its 2m+1 directions.
struct BasisSpec {
  int dim = 1;
  int p = 1;
  std::vector<double> k;
  std::vector<Point2> dir;
  std::vector<int> group;

  int size() const { return static_cast<int>(k.size()); }
  double k_max() const;
};

/// Throws std::invalid_argument on inadmissible parameters: repeated k in 1d;
/// repeated k^2, k = 0 or repeated angles within a group in 2d.
void validate_basis(const BasisSpec& spec);

/// The standard parameter selections: 1d equispaced k = -p..p; 1d tuned
/// {-k_star, 0, k_star} (p = 1 only); 2d k_m = m+1 with 2m+1 equispaced
/// angles per wavenumber.
BasisSpec default_basis(int dim, int p, KMode mode, double k_star = 0.0);

/// Custom 1d wavenumber list (size 2p+1, pairwise distinct).
BasisSpec basis_from_wavenumbers(std::vector<double> k);

/// Custom 2d parameters: wavenumbers k_m and per-wavenumber angle lists.
BasisSpec basis_from_parameters(const std::vector<double>& k_m,
                                const std::vector<std::vector<double>>& angles);

WaveFunctionValue eval_basis(const BasisSpec& spec, int l, Point2 x, double t,
                             double v, double t_start);

/// Values of all basis functions of one element at (x, t).
void eval_basis_values(const BasisSpec& spec, Point2 x, double t, double v,
                       double t_start, Eigen::VectorXcd& values);

/// Values and normal derivatives (grad phi . n) in one pass.
void eval_basis_values_dn(const BasisSpec& spec, Point2 x, double t, double v,
                          double t_start, Point2 n, Eigen::VectorXcd& values,
                          Eigen::VectorXcd& dn);

}  // namespace tdg
