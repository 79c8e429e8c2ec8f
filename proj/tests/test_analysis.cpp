#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tdg/analysis.hpp"

using namespace tdg;

namespace {

Discretization well_disc(int cells, int slabs, int p, double v_star = 20.0) {
  ProblemSpec prob = square_well_problem(v_star);
  SpaceTimeMesh mesh =
      build_mesh(prob.bounds, cells, 1, slabs, prob.final_time, CellShape::Interval);
  return make_discretization(prob, std::move(mesh), default_basis(1, p, KMode::Equispaced));
}

DiscreteSolution random_solution(const Discretization& disc, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  DiscreteSolution sol;
  sol.disc = &disc;
  sol.slab_coeffs.resize(disc.mesh.n_slabs());
  for (auto& v : sol.slab_coeffs) {
    v.resize(disc.dofs().dim());
    for (int i = 0; i < v.size(); ++i) v[i] = Cx(gauss(rng), gauss(rng));
  }
  return sol;
}

}  // namespace

TEST_CASE("norm components are nonnegative and DG+ dominates DG") {
  Discretization disc = well_disc(4, 2, 2);
  for (unsigned seed = 0; seed < 10; ++seed) {
    DiscreteSolution sol = random_solution(disc, seed);
    NormComponents nc = norm_components(disc, discrete_field(sol));
    for (double c : {nc.jump_t, nc.endpoints, nc.dirichlet, nc.jump_n, nc.jump_grad_n,
                     nc.minus_trace, nc.avg_grad, nc.dn_dirichlet, nc.avg_value})
      CHECK(c >= 0.0);
    CHECK(nc.dg_plus_sq() >= nc.dg_sq());
  }
}

TEST_CASE("coercivity cross-check on 20 seeded functions") {
  Discretization disc = well_disc(4, 2, 2);
  for (unsigned seed = 0; seed < 20; ++seed) {
    DiscreteSolution sol = random_solution(disc, 1000 + seed);
    const Cx aww = apply_global_form(disc, sol.slab_coeffs, sol.slab_coeffs);
    const double n2 = norm_components(disc, discrete_field(sol)).dg_sq();
    CHECK(std::abs(aww.imag() - n2) <= 1e-10 * n2);
  }
}

TEST_CASE("zero-error inputs give vanishing norms") {
  ProblemSpec prob = square_well_problem(20.0);
  Discretization disc = well_disc(8, 4, 2);
  DiscreteSolution sol = march(disc, prob);
  // error field of the solution against its own trace representation
  ElementField zero_field = [&sol](int elem, Point2 x, double t, Cx& v, Cvec2& g) {
    const WaveFunctionValue w = sol.eval_element_full(elem, x, t);
    v = w.value - sol.eval_element(elem, x, t);
    g = w.gradient - w.gradient;
  };
  NormComponents nc = norm_components(disc, zero_field);
  CHECK(nc.dg_sq() < 1e-20);
  CHECK(nc.dg_plus_sq() < 1e-20);
}

TEST_CASE("l2 final error is nonnegative and below the solution scale") {
  ProblemSpec prob = square_well_problem(20.0);
  Discretization disc = well_disc(20, 20, 1);
  DiscreteSolution sol = march(disc, prob);
  const double err = l2_final_error(disc, *prob.exact, sol);
  CHECK(err >= 0.0);
  CHECK(err < 1.0);
}

TEST_CASE("energy of the exact solution is conserved; the discrete one dissipates") {
  ProblemSpec prob = square_well_problem(20.0);
  Discretization disc = well_disc(20, 10, 2);

  // exact: E(t) = E(0) for all t (unimodular phase)
  const double e0 = initial_energy(disc, prob.initial);
  for (double t : {0.25, 0.5, 1.0}) {
    double e = 0.0;
    for (int fid : disc.mesh.level_faces[0]) {
      const Face& face = disc.mesh.faces[fid];
      for (const FacePoint& q : disc.quad_points(face))
        e += 0.5 * q.w * std::norm(prob.exact->value(q.x, t));
    }
    CHECK(e == doctest::Approx(e0).epsilon(1e-12));
  }

  DiscreteSolution sol = march(disc, prob);
  CHECK(energy(disc, sol, disc.mesh.n_slabs()) <= e0);
  CHECK_THROWS(energy(disc, sol, 0));
}

TEST_CASE("zero solution has zero energy and zero loss") {
  Discretization disc = well_disc(4, 2, 1);
  ProblemSpec zero = square_well_problem(20.0);
  zero.initial = [](Point2) { return Cx(0, 0); };
  zero.exact.reset();
  DiscreteSolution sol = march(disc, zero);
  CHECK(energy(disc, sol, 2) < 1e-28);
  EnergyLoss loss = energy_loss(disc, zero, sol);
  CHECK(loss.total < 1e-28);
}

TEST_CASE("energy loss: nonnegative parts and the dissipation identity") {
  ProblemSpec prob = square_well_problem(20.0);
  for (int cells : {20, 40}) {
    Discretization disc = well_disc(cells, cells / 2, 2);
    DiscreteSolution sol = march(disc, prob);
    EnergyLoss loss = energy_loss(disc, prob, sol);
    CHECK(loss.total >= 0.0);
    CHECK(loss.delta_e >= 0.0);
    CHECK(loss.initial_mismatch >= 0.0);
    CHECK(loss.total == doctest::Approx(loss.delta_e + loss.initial_mismatch));
    CHECK(loss.identity_gap <= 1e-9);
    const double e0 = initial_energy(disc, prob.initial);
    const double eT = energy(disc, sol, disc.mesh.n_slabs());
    CHECK(e0 - eT == doctest::Approx(loss.total).epsilon(1e-9));
  }
  Discretization disc = well_disc(8, 4, 1);
  ProblemSpec inhom = gaussian_problem();
  DiscreteSolution dummy;
  CHECK_THROWS(energy_loss(disc, inhom, dummy));
}

TEST_CASE("rate fitting") {
  std::vector<std::pair<double, double>> quad, steep;
  for (double h : {0.4, 0.2, 0.1, 0.05}) {
    quad.emplace_back(h, 3.0 * h * h);
    steep.emplace_back(h, 0.7 * std::pow(h, 3.5));
  }
  CHECK(fit_rate(quad) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit_rate(steep) == doctest::Approx(3.5).epsilon(1e-12));
  for (double r : pairwise_rates(quad)) CHECK(r == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS(fit_rate({{0.1, 1.0}}));
  CHECK_THROWS(fit_rate({{0.1, 1.0}, {0.05, -1.0}}));
  CHECK_THROWS(fit_rate({{0.1, 0.0}, {0.05, 0.0}}));
}

TEST_CASE("p-refinement decreases the DG error on a fixed coarse mesh") {
  ProblemSpec prob = square_well_problem(20.0);
  double prev = 1e300;
  for (int p = 1; p <= 3; ++p) {
    SpaceTimeMesh mesh = build_mesh(prob.bounds, 8, 1, 4, 1.0, CellShape::Interval);
    Discretization disc = make_discretization(prob, std::move(mesh),
                                              default_basis(1, p, KMode::Equispaced));
    DiscreteSolution sol = march(disc, prob);
    const double err = std::sqrt(dg_error(disc, *prob.exact, sol).dg_sq());
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("dg error of the marched solution sees the exact gradient") {
  // the DG+ components need exact gradients on interior faces; smoke-test
  // that they are finite and the error norms behave
  ProblemSpec prob = square_well_problem(20.0);
  Discretization disc = well_disc(20, 10, 1);
  DiscreteSolution sol = march(disc, prob);
  NormComponents nc = dg_error(disc, *prob.exact, sol);
  CHECK(std::isfinite(nc.dg_plus_sq()));
  CHECK(nc.dg_sq() > 0.0);
  CHECK(nc.dg_plus_sq() >= nc.dg_sq());
}
