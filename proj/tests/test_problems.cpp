#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tdg/problems.hpp"

using namespace tdg;

namespace {

double well_f(double k, double v) {
  const double g = std::sqrt(v - k * k);
  return g - k * std::tan(k) * std::tanh(g);
}

// second-order central PDE residual |i psi_t + Lap psi - V psi| of an exact solution
double fd_residual(const ExactSolution& exact, int dim, double v, Point2 x, double t,
                   double h) {
  auto f = [&](Point2 p, double s) { return exact.value(p, s); };
  const Cx psi = f(x, t);
  const Cx dt = (f(x, t + h) - f(x, t - h)) / (2 * h);
  Cx lap = (f({x.x + h, x.y}, t) - 2.0 * psi + f({x.x - h, x.y}, t)) / (h * h);
  if (dim == 2) lap += (f({x.x, x.y + h}, t) - 2.0 * psi + f({x.x, x.y - h}, t)) / (h * h);
  return std::abs(Cx(0, 1) * dt + lap - v * psi);
}

}  // namespace

TEST_CASE("bound-state wavenumbers match the known values") {
  CHECK(bound_state_wavenumber(20.0) == doctest::Approx(3.7319).epsilon(1e-4));
  CHECK(bound_state_wavenumber(50.0) == doctest::Approx(6.6394).epsilon(1e-4));
  CHECK(bound_state_wavenumber(100.0) == doctest::Approx(9.6812).epsilon(1e-4));
  CHECK_THROWS(bound_state_wavenumber(-1.0));
}

TEST_CASE("root residual and bracketing") {
  for (double v : {20.0, 50.0, 100.0, 7.3, 333.0}) {
    const double k = bound_state_wavenumber(v);
    CHECK(k > 0.0);
    CHECK(k < std::sqrt(v));
    CHECK(std::abs(well_f(k, v)) < 1e-12);
    // sign change across a +-1e-9 bracket
    CHECK(well_f(k - 1e-9, v) * well_f(k + 1e-9, v) <= 0.0);
  }
}

TEST_CASE("square well: matching, boundary decay and stationarity") {
  ProblemSpec prob = square_well_problem(20.0);
  const double k = bound_state_wavenumber(20.0);

  // continuity at the well wall
  const Cx inner = prob.initial({1.0 - 1e-13, 0});
  const Cx outer = prob.initial({1.0 + 1e-13, 0});
  CHECK(std::abs(inner - outer) < 1e-10);
  CHECK(inner.real() == doctest::Approx(std::cos(k)).epsilon(1e-9));

  // psi_0 vanishes on the boundary
  CHECK(std::abs(prob.initial({2.0, 0})) < 1e-14);
  CHECK(std::abs(prob.initial({-2.0, 0})) < 1e-14);
  CHECK(prob.homogeneous_dirichlet);

  // -psi'' + V psi = k^2 psi at sampled points in both regions (analytic second
  // derivatives of the two branches)
  const double g = std::sqrt(20.0 - k * k);
  for (double x : {-1.7, -0.4, 0.0, 0.8, 1.3, 1.9}) {
    const double v = std::abs(x) < 1.0 ? 0.0 : 20.0;
    const Cx psi = prob.initial({x, 0});
    const Cx dd = std::abs(x) < 1.0 ? -k * k * psi : g * g * psi;
    CHECK(std::abs(-dd + v * psi - k * k * psi) < 1e-8);
  }

  // |psi(x, t)| is time-independent
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-1.99, 1.99), ut(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Point2 x{ux(rng), 0};
    CHECK(std::abs(prob.exact->value(x, ut(rng))) ==
          doctest::Approx(std::abs(prob.initial(x))).epsilon(1e-12));
  }
}

TEST_CASE("square well: exact solution solves the equation") {
  ProblemSpec prob = square_well_problem(20.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-1.95, 1.95), ut(0.05, 0.95);
  for (int i = 0; i < 100; ++i) {
    Point2 x{ux(rng), 0};
    if (std::abs(std::abs(x.x) - 1.0) < 0.05) continue;  // keep FD stencils inside one region
    const double t = ut(rng);
    const double v = std::abs(x.x) < 1.0 ? 0.0 : 20.0;
    // analytic residual: i psi_t = k^2 psi and Lap psi = (V - k^2) psi
    const double k = bound_state_wavenumber(20.0);
    const Cx psi = prob.exact->value(x, t);
    const Cx res = Cx(0, 1) * prob.exact->time_derivative(x, t) + (v - k * k) * psi - v * psi;
    CHECK(std::abs(res) < 1e-8);
    CHECK(fd_residual(*prob.exact, 1, v, x, t, 1e-4) < 1e-5);
  }
}

TEST_CASE("square well: gradient matches finite differences") {
  ProblemSpec prob = square_well_problem(50.0);
  const double h = 1e-6;
  for (double x : {-1.8, -0.6, 0.3, 1.5}) {
    const double t = 0.37;
    const Cx fd =
        (prob.exact->value({x + h, 0}, t) - prob.exact->value({x - h, 0}, t)) / (2 * h);
    CHECK(std::abs(fd - prob.exact->gradient({x, 0}, t).x) < 1e-7);
  }
}

TEST_CASE("gaussian: value at the origin and initial trace") {
  ProblemSpec prob = gaussian_problem();
  CHECK(std::abs(prob.exact->value({0, 0}, 0.0) - Cx(1, 0)) < 1e-15);

  // |psi_0| = e^{-(x^2+y^2)} at t = 0, checked against the general formula
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ux(-2.0, 4.0), uy(-2.5, 2.5);
  for (int i = 0; i < 10; ++i) {
    const Point2 x{ux(rng), uy(rng)};
    const double expect = std::exp(-(x.x * x.x + x.y * x.y));
    CHECK(std::abs(std::abs(prob.initial(x)) - expect) < 1e-12 * std::max(1.0, expect));
    CHECK(std::abs(prob.initial(x) - prob.exact->value(x, 0.0)) < 1e-15);
  }
}

TEST_CASE("gaussian: PDE residual, analytic and finite-difference") {
  ProblemSpec prob = gaussian_problem();
  // closed-form Laplacian of psi = a e^{-aW}: (-4a + a^2 (4W - 4it - 1)) psi
  auto laplacian = [&](Point2 x, double t) {
    const Cx a = Cx(0, 1) / Cx(-4.0 * t, 1.0);
    const Cx w = Cx(x.x * x.x + x.y * x.y, x.x + t);
    return (-4.0 * a + a * a * (4.0 * w - Cx(0, 4.0 * t) - 1.0)) * prob.exact->value(x, t);
  };
  {
    const Point2 x{1.0, -0.5};
    const double t = 0.3;
    const Cx res = Cx(0, 1) * prob.exact->time_derivative(x, t) + laplacian(x, t);
    CHECK(std::abs(res) < 1e-8);
    // and relative agreement of the FD residual pieces with the analytic ones
    const double h = 1e-5;
    const Cx dt_fd = (prob.exact->value(x, t + h) - prob.exact->value(x, t - h)) / (2 * h);
    CHECK(std::abs(dt_fd - prob.exact->time_derivative(x, t)) <
          1e-6 * std::abs(prob.exact->time_derivative(x, t)));
    CHECK(fd_residual(*prob.exact, 2, 0.0, x, t, 1e-5) < 1e-5);
  }
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ux(-1.8, 3.8), uy(-2.3, 2.3), ut(0.05, 1.95);
  for (int i = 0; i < 100; ++i) {
    const Point2 x{ux(rng), uy(rng)};
    const double t = ut(rng);
    const Cx res = Cx(0, 1) * prob.exact->time_derivative(x, t) + laplacian(x, t);
    CHECK(std::abs(res) < 1e-8);
    CHECK(fd_residual(*prob.exact, 2, 0.0, x, t, 1e-4) < 1e-6);
  }
}

TEST_CASE("gaussian: gradient and time derivative against finite differences") {
  ProblemSpec prob = gaussian_problem();
  const double h = 1e-6;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ux(-1.5, 3.5), uy(-2.0, 2.0), ut(0.1, 1.9);
  for (int i = 0; i < 30; ++i) {
    const Point2 x{ux(rng), uy(rng)};
    const double t = ut(rng);
    const Cvec2 g = prob.exact->gradient(x, t);
    const Cx gx_fd =
        (prob.exact->value({x.x + h, x.y}, t) - prob.exact->value({x.x - h, x.y}, t)) / (2 * h);
    const Cx gy_fd =
        (prob.exact->value({x.x, x.y + h}, t) - prob.exact->value({x.x, x.y - h}, t)) / (2 * h);
    const Cx dt_fd = (prob.exact->value(x, t + h) - prob.exact->value(x, t - h)) / (2 * h);
    const double scale = std::max(1.0, std::abs(prob.exact->value(x, t)));
    CHECK(std::abs(gx_fd - g.x) < 1e-6 * scale);
    CHECK(std::abs(gy_fd - g.y) < 1e-6 * scale);
    CHECK(std::abs(dt_fd - prob.exact->time_derivative(x, t)) < 1e-6 * scale);
  }
}

TEST_CASE("exact solutions agree with the initial datum at t=0") {
  for (const ProblemSpec& prob : {square_well_problem(20.0), gaussian_problem()}) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> ux(prob.bounds.lo.x, prob.bounds.hi.x);
    std::uniform_real_distribution<double> uy(prob.bounds.lo.y, prob.bounds.hi.y + 1e-30);
    for (int i = 0; i < 40; ++i) {
      const Point2 x{ux(rng), prob.dim == 2 ? uy(rng) : 0.0};
      CHECK(std::abs(prob.exact->value(x, 0.0) - prob.initial(x)) < 1e-10);
    }
  }
}

TEST_CASE("potential binding enforces mesh alignment") {
  ProblemSpec prob = square_well_problem(20.0);
  SpaceTimeMesh aligned = build_mesh(prob.bounds, 8, 1, 1, 1.0, CellShape::Interval);
  const std::vector<double> v = bind_potential(aligned.space, prob.potential);
  REQUIRE(v.size() == 8);
  CHECK(v[0] == 20.0);   // (-2, -1.5)
  CHECK(v[3] == 0.0);    // (-0.5, 0)
  CHECK(v[7] == 20.0);   // (1.5, 2)

  // 10 cells: walls at +-1 fall inside cells (-1.2,-0.8), (0.8,1.2)
  SpaceTimeMesh misaligned = build_mesh(prob.bounds, 10, 1, 1, 1.0, CellShape::Interval);
  CHECK_THROWS_AS(bind_potential(misaligned.space, prob.potential), std::runtime_error);
}
