#include "tdg/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tdg {

double BasisSpec::k_max() const {
  double m = 0.0;
  for (double v : k) m = std::max(m, std::abs(v));
  return m;
}

void validate_basis(const BasisSpec& spec) {
  const int n = spec.size();
  if (spec.p < 1) throw std::invalid_argument("basis: degree p must be >= 1");
  if (static_cast<int>(spec.dir.size()) != n || static_cast<int>(spec.group.size()) != n)
    throw std::invalid_argument("basis: k, dir, group sizes disagree");
  for (const Point2& d : spec.dir)
    if (std::abs(norm(d) - 1.0) > 1e-12)
      throw std::invalid_argument("basis: directions must be unit vectors");

  if (spec.dim == 1) {
    if (n != 2 * spec.p + 1)
      throw std::invalid_argument("basis: d=1 needs 2p+1 wavenumbers, got " + std::to_string(n));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (spec.k[i] * spec.dir[i].x == spec.k[j] * spec.dir[j].x)
          throw std::invalid_argument("basis: d=1 wavenumbers must be pairwise distinct");
    return;
  }

  if (n != (spec.p + 1) * (spec.p + 1))
    throw std::invalid_argument("basis: d=2 needs (p+1)^2 functions, got " + std::to_string(n));
  // group structure: wavenumber m carries 2m+1 distinct directions
  std::vector<double> km(spec.p + 1, 0.0);
  std::vector<std::vector<double>> angles(spec.p + 1);
  for (int l = 0; l < n; ++l) {
    const int m = spec.group[l];
    if (m < 0 || m > spec.p) throw std::invalid_argument("basis: bad group index");
    if (spec.k[l] == 0.0) throw std::invalid_argument("basis: d=2 wavenumbers must be nonzero");
    if (!angles[m].empty() && km[m] != spec.k[l])
      throw std::invalid_argument("basis: wavenumber differs within a group");
    km[m] = spec.k[l];
    angles[m].push_back(std::atan2(spec.dir[l].y, spec.dir[l].x));
  }
  for (int m = 0; m <= spec.p; ++m) {
    if (static_cast<int>(angles[m].size()) != 2 * m + 1)
      throw std::invalid_argument("basis: group " + std::to_string(m) + " needs " +
                                  std::to_string(2 * m + 1) + " directions");
    for (size_t i = 0; i < angles[m].size(); ++i)
      for (size_t j = i + 1; j < angles[m].size(); ++j)
        if (std::abs(angles[m][i] - angles[m][j]) < 1e-14)
          throw std::invalid_argument("basis: repeated direction angle in group " +
                                      std::to_string(m));
    for (int m2 = m + 1; m2 <= spec.p; ++m2)
      if (km[m] * km[m] == km[m2] * km[m2])
        throw std::invalid_argument("basis: d=2 squared wavenumbers must be pairwise distinct");
  }
}

BasisSpec default_basis(int dim, int p, KMode mode, double k_star) {
  if (p < 1) throw std::invalid_argument("basis: degree p must be >= 1");
  BasisSpec spec;
  spec.dim = dim;
  spec.p = p;
  if (dim == 1) {
    if (mode == KMode::Tuned) {
      if (p != 1) throw std::invalid_argument("basis: tuned mode is defined for p = 1 only");
      if (k_star <= 0.0) throw std::invalid_argument("basis: tuned mode needs k_star > 0");
      spec.k = {-k_star, 0.0, k_star};
    } else {
      for (int l = -p; l <= p; ++l) spec.k.push_back(static_cast<double>(l));
    }
    spec.dir.assign(spec.k.size(), {1.0, 0.0});
    spec.group.assign(spec.k.size(), 0);
  } else if (dim == 2) {
    if (mode == KMode::Tuned) throw std::invalid_argument("basis: tuned mode is d=1 only");
    for (int m = 0; m <= p; ++m) {
      const double km = m + 1.0;
      for (int lam = 1; lam <= 2 * m + 1; ++lam) {
        const double theta = 2.0 * M_PI * (lam - 1) / (2 * m + 1);
        spec.k.push_back(km);
        spec.dir.push_back({std::cos(theta), std::sin(theta)});
        spec.group.push_back(m);
      }
    }
  } else {
    throw std::invalid_argument("basis: dimension must be 1 or 2");
  }
  validate_basis(spec);
  return spec;
}

BasisSpec basis_from_wavenumbers(std::vector<double> k) {
  if (k.size() % 2 != 1) throw std::invalid_argument("basis: d=1 needs an odd number (2p+1) of wavenumbers");
  BasisSpec spec;
  spec.dim = 1;
  spec.p = (static_cast<int>(k.size()) - 1) / 2;
  spec.k = std::move(k);
  spec.dir.assign(spec.k.size(), {1.0, 0.0});
  spec.group.assign(spec.k.size(), 0);
  validate_basis(spec);
  return spec;
}

BasisSpec basis_from_parameters(const std::vector<double>& k_m,
                                const std::vector<std::vector<double>>& angles) {
  if (k_m.size() != angles.size() || k_m.empty())
    throw std::invalid_argument("basis: need one angle list per wavenumber");
  BasisSpec spec;
  spec.dim = 2;
  spec.p = static_cast<int>(k_m.size()) - 1;
  for (size_t m = 0; m < k_m.size(); ++m)
    for (double theta : angles[m]) {
      spec.k.push_back(k_m[m]);
      spec.dir.push_back({std::cos(theta), std::sin(theta)});
      spec.group.push_back(static_cast<int>(m));
    }
  validate_basis(spec);
  return spec;
}

WaveFunctionValue eval_basis(const BasisSpec& spec, int l, Point2 x, double t,
                             double v, double t_start) {
  const double k = spec.k[l];
  const Point2 d = spec.dir[l];
  const double omega = k * k + v;
  const double phase = k * dot(d, x) - omega * (t - t_start);
  WaveFunctionValue out;
  out.value = Cx(std::cos(phase), std::sin(phase));
  const Cx ikv = Cx(0.0, k) * out.value;
  out.gradient = {ikv * d.x, ikv * d.y};
  out.time_derivative = Cx(0.0, -omega) * out.value;
  return out;
}

void eval_basis_values(const BasisSpec& spec, Point2 x, double t, double v,
                       double t_start, Eigen::VectorXcd& values) {
  const int n = spec.size();
  values.resize(n);
  const double tau = t - t_start;
  for (int l = 0; l < n; ++l) {
    const double k = spec.k[l];
    const double phase = k * dot(spec.dir[l], x) - (k * k + v) * tau;
    values[l] = Cx(std::cos(phase), std::sin(phase));
  }
}

void eval_basis_values_dn(const BasisSpec& spec, Point2 x, double t, double v,
                          double t_start, Point2 n, Eigen::VectorXcd& values,
                          Eigen::VectorXcd& dn) {
  eval_basis_values(spec, x, t, v, t_start, values);
  const int nb = spec.size();
  dn.resize(nb);
  for (int l = 0; l < nb; ++l)
    dn[l] = Cx(0.0, spec.k[l] * dot(spec.dir[l], n)) * values[l];
}

}  // namespace tdg
