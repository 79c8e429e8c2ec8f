#include "tdg/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace tdg {

double PiecewiseConstantPotential::operator()(Point2 x) const {
  const int r = region_of(x);
  if (r < 0) throw std::runtime_error("potential: point outside every region");
  return regions[r].value;
}

int PiecewiseConstantPotential::region_of(Point2 x) const {
  for (size_t r = 0; r < regions.size(); ++r)
    if (regions[r].contains(x)) return static_cast<int>(r);
  return -1;
}

namespace {

double well_f(double k, double v_star) {
  const double g = std::sqrt(v_star - k * k);
  return g - k * std::tan(k) * std::tanh(g);
}

// Sign-change bisection on a pole-free bracket.
double bisect(double a, double b, double fa, const std::function<double(double)>& f) {
  for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fa < 0) == (fm < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double bound_state_wavenumber(double v_star) {
  if (v_star <= 0.0) throw std::invalid_argument("bound_state_wavenumber: v_star must be > 0");
  const double k_end = std::sqrt(v_star);
  auto f = [v_star](double k) { return well_f(k, v_star); };

  // Sample (0, sqrt(V)); split sampling intervals at tan poles (m+1/2)pi.
  const int n_grid = 10 * static_cast<int>(std::ceil(k_end));
  const double pad = 1e-6;
  std::vector<double> roots;
  double lo = pad * k_end;
  const double step = (k_end - 2 * pad * k_end) / n_grid;
  for (int i = 0; i < n_grid; ++i) {
    double a = lo + i * step;
    double b = a + step;
    // poles strictly inside (a, b)
    std::vector<double> cuts{a};
    const int m0 = static_cast<int>(std::floor(a / M_PI - 0.5)) + 1;
    for (int m = m0; (m + 0.5) * M_PI < b; ++m) {
      const double pole = (m + 0.5) * M_PI;
      if (pole > a) {
        cuts.push_back(pole - pad);
        cuts.push_back(pole + pad);
      }
    }
    cuts.push_back(b);
    for (size_t s = 0; s + 1 < cuts.size(); s += 2) {
      const double sa = cuts[s], sb = cuts[s + 1];
      if (sb <= sa) continue;
      const double fa = f(sa), fb = f(sb);
      if ((fa < 0) != (fb < 0)) roots.push_back(bisect(sa, sb, fa, f));
    }
  }
  if (roots.empty())
    throw std::runtime_error("bound_state_wavenumber: no root bracketed in (0, sqrt(v_star))");
  double k_star = roots.front();
  for (double r : roots) k_star = std::max(k_star, r);
  return k_star;
}

ProblemSpec square_well_problem(double v_star) {
  const double k = bound_state_wavenumber(v_star);
  if (v_star <= k * k)
    throw std::runtime_error("square_well_problem: v_star must exceed k*^2");
  const double g = std::sqrt(v_star - k * k);
  const double c_out = std::cos(k) / std::sinh(g);
  const double omega = k * k;

  auto psi0 = [k, g, c_out](Point2 p) -> Cx {
    const double ax = std::abs(p.x);
    if (ax < 1.0) return Cx(std::cos(k * p.x), 0.0);
    return Cx(c_out * std::sinh(g * (2.0 - ax)), 0.0);
  };
  auto psi0_dx = [k, g, c_out](double x) -> double {
    const double ax = std::abs(x);
    if (ax < 1.0) return -k * std::sin(k * x);
    const double sgn = x >= 0.0 ? 1.0 : -1.0;
    return -sgn * g * c_out * std::cosh(g * (2.0 - ax));
  };

  ProblemSpec prob;
  prob.name = "square-well";
  prob.dim = 1;
  prob.bounds = {{-2.0, 0.0}, {2.0, 0.0}};
  prob.final_time = 1.0;
  prob.potential.regions = {
      {[](Point2 p) { return std::abs(p.x) < 1.0; }, 0.0},
      {[](Point2) { return true; }, v_star},
  };
  prob.initial = psi0;
  prob.dirichlet = [](Point2, double) { return Cx(0.0, 0.0); };
  prob.homogeneous_dirichlet = true;
  prob.data_space_rate = std::max(k, g);

  ExactSolution exact;
  exact.value = [psi0, omega](Point2 p, double t) {
    return psi0(p) * std::exp(Cx(0.0, -omega * t));
  };
  exact.gradient = [psi0_dx, omega](Point2 p, double t) -> Cvec2 {
    const Cx phase = std::exp(Cx(0.0, -omega * t));
    return {psi0_dx(p.x) * phase, Cx(0.0, 0.0)};
  };
  exact.time_derivative = [psi0, omega](Point2 p, double t) {
    return Cx(0.0, -omega) * psi0(p) * std::exp(Cx(0.0, -omega * t));
  };
  prob.exact = exact;
  return prob;
}

ProblemSpec gaussian_problem() {
  // psi = a(t) exp(-a(t) W), a = i/(i - 4t), W = x^2 + y^2 + ix + it.
  auto coeff = [](double t) { return Cx(0.0, 1.0) / Cx(-4.0 * t, 1.0); };
  auto value = [coeff](Point2 p, double t) {
    const Cx a = coeff(t);
    const Cx w = Cx(p.x * p.x + p.y * p.y, p.x + t);
    return a * std::exp(-a * w);
  };

  ProblemSpec prob;
  prob.name = "gaussian";
  prob.dim = 2;
  prob.bounds = {{-2.0, -2.5}, {4.0, 2.5}};
  prob.final_time = 2.0;
  prob.potential.regions = {{[](Point2) { return true; }, 0.0}};
  prob.initial = [value](Point2 p) { return value(p, 0.0); };
  prob.dirichlet = [value](Point2 p, double t) { return value(p, t); };
  prob.homogeneous_dirichlet = false;
  // pointwise bounds over the closure of Q on the phase/envelope rates of the
  // exponent -a(t) W: |d/dx| <= (1 + 32t)/(1 + 16t^2) + 2|x| and
  // |d/dt| ~ |1 - 4(x^2+y^2)| near t = 0, which peaks at the far corner
  prob.data_space_rate = 9.0;
  prob.data_time_rate = 4.0 * (4.0 * 4.0 + 2.5 * 2.5) + 1.0;

  ExactSolution exact;
  exact.value = value;
  exact.gradient = [coeff, value](Point2 p, double t) -> Cvec2 {
    const Cx a = coeff(t);
    const Cx psi = value(p, t);
    return {-a * Cx(2.0 * p.x, 1.0) * psi, -a * (2.0 * p.y) * psi};
  };
  exact.time_derivative = [coeff, value](Point2 p, double t) {
    const Cx a = coeff(t);
    const Cx da = Cx(0.0, -4.0) * a * a;  // a' = -4i a^2
    const Cx w = Cx(p.x * p.x + p.y * p.y, p.x + t);
    const Cx psi = value(p, t);
    // d/dt [a e^{-aW}] = (a'/a - a'W - ia) psi
    return (da / a - da * w - Cx(0.0, 1.0) * a) * psi;
  };
  prob.exact = exact;
  return prob;
}

std::vector<double> bind_potential(const SpatialMesh& space,
                                   const PiecewiseConstantPotential& potential) {
  std::vector<double> values(space.cells.size());
  for (size_t c = 0; c < space.cells.size(); ++c) {
    const SpatialCell& cell = space.cells[c];
    const Point2 mid = cell.centroid();
    const int region = potential.region_of(mid);
    if (region < 0) throw std::runtime_error("bind_potential: cell centroid outside all regions");
    // sample strictly interior points near each vertex
    for (int i = 0; i < cell.nv; ++i) {
      const Point2 probe = 0.99 * cell.v[i] + 0.01 * mid;
      if (potential.region_of(probe) != region)
        throw std::runtime_error("bind_potential: cell " + std::to_string(c) +
                                 " straddles a potential region boundary");
    }
    values[c] = potential.regions[region].value;
  }
  return values;
}

}  // namespace tdg
