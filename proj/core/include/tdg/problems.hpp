#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tdg/mesh.hpp"
#include "tdg/types.hpp"

namespace tdg {

/// Piecewise-constant potential given as ordered (predicate, value) regions;
/// the first matching region wins.
struct PiecewiseConstantPotential {
  struct Region {
    std::function<bool(Point2)> contains;
    double value = 0.0;
  };
  std::vector<Region> regions;

  double operator()(Point2 x) const;
  int region_of(Point2 x) const;  // -1 if no region matches
};

struct ExactSolution {
  std::function<Cx(Point2, double)> value;
  std::function<Cvec2(Point2, double)> gradient;
  std::function<Cx(Point2, double)> time_derivative;
};

struct ProblemSpec {
  std::string name;
  int dim = 1;
  Box2 bounds;
  double final_time = 1.0;
  PiecewiseConstantPotential potential;
  std::function<Cx(Point2)> initial;            // psi_0
  std::function<Cx(Point2, double)> dirichlet;  // g_D
  bool homogeneous_dirichlet = false;
  std::optional<ExactSolution> exact;
  // upper bounds on the phase rates of the data psi_0 and g_D; they drive
  // the node counts on the data-carrying faces F^0 and F^D
  double data_space_rate = 0.0;
  double data_time_rate = 0.0;
};

/// Largest k in (0, sqrt(v_star)) with
///   sqrt(v_star - k^2) = k tan(k) tanh(sqrt(v_star - k^2)),
/// i.e. the fastest-oscillating bound state of the square well.
double bound_state_wavenumber(double v_star);

/// Square-well benchmark on (-2,2) x (0,1): V = 0 inside (-1,1), v_star
/// outside, bound-state initial datum, exact solution psi_0(x) e^{-i k*^2 t}.
ProblemSpec square_well_problem(double v_star);

/// Free-particle Gaussian benchmark on (-2,4) x (-2.5,2.5) x (0,2) with a
/// known closed-form solution; data traced from it.
ProblemSpec gaussian_problem();

/// Per-cell potential values; throws if any cell straddles a region
/// boundary (mesh not aligned with the potential).
std::vector<double> bind_potential(const SpatialMesh& space,
                                   const PiecewiseConstantPotential& potential);

}  // namespace tdg
