#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tdg/problems.hpp"
#include "tdg/taylor.hpp"

using namespace tdg;

namespace {

// 3x3 determinant by cofactor expansion, independent of any library path.
Cx det3(const Eigen::MatrixXcd& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

// Taylor coefficients of the square-well bound state cos(k x) e^{-i k^2 t}
// around (z, s), via cos(kx) = (e^{ikx} + e^{-ikx}) / 2 with V = 0.
Eigen::VectorXcd bound_state_coeffs(double k, Point2 z, double s, int p) {
  BasisSpec pair = basis_from_wavenumbers({-k, 0.0, k});
  return 0.5 * (basis_taylor_coeffs(pair, 0, 0.0, z, s, p) +
                basis_taylor_coeffs(pair, 2, 0.0, z, s, p));
}

int index_of(const std::vector<MultiIndex>& idx, int jx, int jy, int jt) {
  for (size_t r = 0; r < idx.size(); ++r)
    if (idx[r].jx == jx && idx[r].jy == jy && idx[r].jt == jt) return static_cast<int>(r);
  return -1;
}

}  // namespace

TEST_CASE("multi-index enumeration sizes") {
  CHECK(multi_indices(1, 3).size() == 10);  // (p+1)(p+2)/2
  CHECK(multi_indices(2, 3).size() == 20);  // (p+1)(p+2)(p+3)/6
  CHECK(multi_indices(1, 7).size() == 36);
}

TEST_CASE("taylor coefficients of simple functions") {
  // k = 0, V = 0: the constant function
  BasisSpec b = default_basis(1, 2, KMode::Equispaced);
  Eigen::VectorXcd c = basis_taylor_coeffs(b, 2, 0.0, {0.4, 0}, 0.2, 2);
  const auto idx = multi_indices(1, 2);
  for (size_t r = 0; r < idx.size(); ++r)
    CHECK(std::abs(c[r] - (idx[r].total() == 0 ? Cx(1, 0) : Cx(0, 0))) < 1e-15);

  // k = 1, V = 0 at the origin: e^{i(x - t)} has c_{1,0} = i, c_{0,1} = -i
  c = basis_taylor_coeffs(b, 3, 0.0, {0, 0}, 0.0, 2);
  CHECK(std::abs(c[index_of(idx, 0, 0, 0)] - Cx(1, 0)) < 1e-15);
  CHECK(std::abs(c[index_of(idx, 1, 0, 0)] - Cx(0, 1)) < 1e-15);
  CHECK(std::abs(c[index_of(idx, 0, 0, 1)] - Cx(0, -1)) < 1e-15);
}

TEST_CASE("taylor coefficients match divided central differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    BasisSpec b = default_basis(1, 2, KMode::Equispaced);
    const int l = std::uniform_int_distribution<int>(0, 4)(rng);
    const double v = trial % 2 == 0 ? 0.0 : 14.0;
    const Point2 z{u(rng), 0};
    const double s = u(rng);
    const Eigen::VectorXcd c = basis_taylor_coeffs(b, l, v, z, s, 2);
    auto f = [&](double x, double t) { return eval_basis(b, l, {x, 0}, t, v, 0.0).value; };
    const double h = 1e-4;
    const auto idx = multi_indices(1, 2);
    // first derivatives over 1!, second over 2!
    const Cx dx = (f(z.x + h, s) - f(z.x - h, s)) / (2 * h);
    const Cx dt = (f(z.x, s + h) - f(z.x, s - h)) / (2 * h);
    const Cx dxx = (f(z.x + h, s) - 2.0 * f(z.x, s) + f(z.x - h, s)) / (h * h) / 2.0;
    CHECK(std::abs(dx - c[index_of(idx, 1, 0, 0)]) < 1e-6 * std::max(1.0, std::abs(dx)));
    CHECK(std::abs(dt - c[index_of(idx, 0, 0, 1)]) < 1e-6 * std::max(1.0, std::abs(dt)));
    CHECK(std::abs(dxx - c[index_of(idx, 2, 0, 0)]) < 1e-5 * std::max(1.0, std::abs(dxx)));
  }
}

TEST_CASE("p=1 square system determinant |det V| = 2") {
  BasisSpec b = default_basis(1, 1, KMode::Equispaced);  // k = {-1, 0, 1}
  const Eigen::MatrixXcd vm = vandermonde_moment_matrix(b, 0.0);
  REQUIRE(vm.rows() == 3);
  CHECK(std::abs(det3(vm)) == doctest::Approx(2.0).epsilon(1e-13));
  // and the square subsystem factors as V D with unimodular diagonal
  const Point2 z{0.3, 0};
  const double s = 0.7;
  const Eigen::MatrixXcd m = taylor_matrix(b, 0.0, z, s, 1);
  for (int l = 0; l < 3; ++l) {
    const Cx phi = eval_basis(b, l, z, s, 0.0, 0.0).value;
    CHECK(std::abs(std::abs(phi) - 1.0) < 1e-14);
    for (int r = 0; r < 3; ++r) CHECK(std::abs(m(r, l) - vm(r, l) * phi) < 1e-12);
  }
}

TEST_CASE("rank of the default 1d bases") {
  for (int p : {1, 2, 3, 4}) {
    BasisSpec b = default_basis(1, p, KMode::Equispaced);
    RankResult r = check_rank(b, 0.0, p);
    CHECK(r.full_rank);
    CHECK(r.rank == 2 * p + 1);
    RankResult rv = check_rank(b, 20.0, p);
    CHECK(rv.full_rank);
  }
}

TEST_CASE("repeated wavenumbers drop the rank") {
  BasisSpec degenerate;  // aggregate init skips the admissibility validation
  degenerate.dim = 1;
  degenerate.p = 2;
  degenerate.k = {1.0, 1.0, 0.0, -1.0, -2.0};
  degenerate.dir.assign(5, {1.0, 0.0});
  degenerate.group.assign(5, 0);
  RankResult r = check_rank(degenerate, 0.0, 2);
  CHECK_FALSE(r.full_rank);
  CHECK(r.rank < 5);
}

TEST_CASE("2d inadmissible parameter sets drop the rank, one clause at a time") {
  // equal squared wavenumbers
  BasisSpec equal_sq = default_basis(2, 1, KMode::Equispaced);
  equal_sq.k = {1.0, -1.0, -1.0, -1.0};
  RankResult r1 = check_rank(equal_sq, 0.0, 1);
  CHECK_FALSE(r1.full_rank);

  // zero wavenumber: all directions of that group collapse to one constant
  BasisSpec zero_k = default_basis(2, 1, KMode::Equispaced);
  zero_k.k[1] = zero_k.k[2] = zero_k.k[3] = 0.0;
  RankResult r2 = check_rank(zero_k, 0.0, 1);
  CHECK_FALSE(r2.full_rank);

  // repeated angle within a group
  BasisSpec rep_angle = default_basis(2, 1, KMode::Equispaced);
  rep_angle.dir[2] = rep_angle.dir[1];
  RankResult r3 = check_rank(rep_angle, 0.0, 1);
  CHECK_FALSE(r3.full_rank);
}

TEST_CASE("coefficient recurrences") {
  BasisSpec b = default_basis(1, 3, KMode::Equispaced);
  // any wave function satisfies the relations exactly
  for (int l = 0; l < b.size(); ++l) {
    const Eigen::VectorXcd c = basis_taylor_coeffs(b, l, 11.0, {0.3, 0}, 0.4, 3);
    CHECK(check_recurrence(c, 11.0, 1, 3) < 1e-12);
  }

  // e^{i(x + t)} is NOT a local solution for V = 0: residual 2 at j = (0,0)
  const auto idx = multi_indices(1, 2);
  Eigen::VectorXcd c(idx.size());
  for (size_t r = 0; r < idx.size(); ++r) {
    const MultiIndex& j = idx[r];
    Cx v(1, 0);
    for (int q = 0; q < j.jx + j.jt; ++q) v *= Cx(0, 1);
    double fact = 1.0;
    for (int q = 2; q <= j.jx; ++q) fact *= q;
    for (int q = 2; q <= j.jt; ++q) fact *= q;
    c[r] = v / fact;
  }
  CHECK(check_recurrence(c, 0.0, 1, 2) == doctest::Approx(2.0).epsilon(1e-13));

  // the square-well bound state inside the well is a local solution
  const double ks = bound_state_wavenumber(20.0);
  const Eigen::VectorXcd bs = bound_state_coeffs(ks, {0.3, 0}, 0.2, 3);
  CHECK(check_recurrence(bs, 0.0, 1, 3) < 1e-8);
}

TEST_CASE("2d recurrence includes the second spatial direction") {
  BasisSpec b = default_basis(2, 2, KMode::Equispaced);
  for (int l : {0, 3, 8}) {
    const Eigen::VectorXcd c = basis_taylor_coeffs(b, l, 5.0, {0.2, -0.3}, 0.1, 2);
    CHECK(check_recurrence(c, 5.0, 2, 2) < 1e-12);
  }
}

TEST_CASE("matching members and linear combinations") {
  BasisSpec b = default_basis(1, 2, KMode::Equispaced);
  const Point2 z{0.25, 0};
  const double s = 0.6;

  // a basis member comes back as a coordinate vector
  Eigen::VectorXcd e3 = basis_taylor_coeffs(b, 3, 0.0, z, s, 2);
  MatchResult m1 = match_taylor(b, 0.0, z, s, 2, e3);
  CHECK(m1.residual < 1e-12);
  for (int l = 0; l < b.size(); ++l)
    CHECK(std::abs(m1.a[l] - (l == 3 ? Cx(1, 0) : Cx(0, 0))) < 1e-10);

  // 2 phi_1 - i phi_2
  Eigen::VectorXcd combo = 2.0 * basis_taylor_coeffs(b, 1, 0.0, z, s, 2) -
                           Cx(0, 1) * basis_taylor_coeffs(b, 2, 0.0, z, s, 2);
  MatchResult m2 = match_taylor(b, 0.0, z, s, 2, combo);
  CHECK(m2.residual < 1e-12);
  CHECK(std::abs(m2.a[1] - Cx(2, 0)) < 1e-10);
  CHECK(std::abs(m2.a[2] - Cx(0, -1)) < 1e-10);
}

TEST_CASE("matching the bound state: off-span Taylor data still closes") {
  // cos(k* x) e^{-i k*^2 t} with k* irrational is not in the span of the
  // integer-wavenumber basis, but its degree-2 data must be matchable.
  const double ks = bound_state_wavenumber(20.0);
  BasisSpec b = default_basis(1, 2, KMode::Equispaced);
  const Point2 z{0.3, 0};
  const double s = 0.2;
  const Eigen::VectorXcd bs = bound_state_coeffs(ks, z, s, 2);
  MatchResult m = match_taylor(b, 0.0, z, s, 2, bs);
  CHECK(m.residual <= 1e-8);
  // the target is genuinely outside the span: coefficients are not a basis pick
  double away = 0.0;
  for (int l = 0; l < b.size(); ++l) away += std::abs(m.a[l]);
  CHECK(away > 1.0);
}

TEST_CASE("inadmissible parameters are reported by the matcher") {
  BasisSpec degenerate;
  degenerate.dim = 1;
  degenerate.p = 1;
  degenerate.k = {1.0, 1.0, 0.0};
  degenerate.dir.assign(3, {1.0, 0.0});
  degenerate.group.assign(3, 0);
  Eigen::VectorXcd b = basis_taylor_coeffs(degenerate, 2, 0.0, {0, 0}, 0.0, 1);
  CHECK_THROWS_AS(match_taylor(degenerate, 0.0, {0, 0}, 0.0, 1, b), std::invalid_argument);
}

TEST_CASE("2d factors: S = P G, S invertible, rank full for p <= 3") {
  for (int p : {1, 2, 3}) {
    BasisSpec b = default_basis(2, p, KMode::Equispaced);
    for (double v : {0.0, 3.0}) {
      const SFactors f = s_factors(b, v, p);
      CHECK((f.s - f.p_map * f.g).cwiseAbs().maxCoeff() < 1e-10);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f.s);
      CHECK(svd.singularValues()(svd.singularValues().size() - 1) > 0.0);
      RankResult r = check_rank(b, v, p);
      CHECK(r.full_rank);
      CHECK(r.rank == (p + 1) * (p + 1));
    }
  }
}

TEST_CASE("2d matching via the constructive S route agrees with least squares") {
  BasisSpec b = default_basis(2, 2, KMode::Equispaced);
  const Point2 z{0.15, -0.35};
  const double s = 0.4;
  // an off-span local solution: plane waves at shifted wavenumbers
  BasisSpec probe = default_basis(2, 1, KMode::Equispaced);
  for (double& k : probe.k) k += 0.41;
  Eigen::VectorXcd target = Eigen::VectorXcd::Zero(multi_indices(2, 2).size());
  for (int l = 0; l < probe.size(); ++l)
    target += basis_taylor_coeffs(probe, l, 0.0, z, s, 2) * Cx(0.3 * l - 0.5, 0.2);

  MatchResult m = match_taylor(b, 0.0, z, s, 2, target);
  CHECK(m.residual < 1e-8);

  // generic least-squares fallback on the full rectangular system
  const Eigen::MatrixXcd mat = taylor_matrix(b, 0.0, z, s, 2);
  const Eigen::VectorXcd a_ls =
      mat.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(target);
  CHECK((mat * a_ls - target).norm() <= 1e-8 * target.norm());
  CHECK((m.a - a_ls).norm() <= 1e-6 * std::max(1.0, a_ls.norm()));
}
