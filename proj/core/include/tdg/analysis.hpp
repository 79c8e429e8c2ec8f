#pragma once

#include <functional>
#include <vector>

#include "tdg/assembly.hpp"
#include "tdg/timestepper.hpp"

namespace tdg {

/// Squared components of the skeleton seminorms. The first five sum to
/// ||| . |||_DG^2; all nine to ||| . |||_DG+^2. The time-jump term carries
/// the factor 1/2 that makes Im A(w,w) = ||| w |||_DG^2 an exact identity.
struct NormComponents {
  double jump_t = 0.0;       // 1/2 ||[w]_t||^2 on F^space
  double endpoints = 0.0;    // 1/2 ||w||^2 on F^0 u F^T
  double dirichlet = 0.0;    // ||a^1/2 w||^2 on F^D
  double jump_n = 0.0;       // ||a^1/2 [w]_N||^2 on F^time
  double jump_grad_n = 0.0;  // ||b^1/2 [grad w]_N||^2 on F^time
  double minus_trace = 0.0;  // ||w^-||^2 on F^space
  double avg_grad = 0.0;     // ||a^-1/2 {grad w}||^2 on F^time
  double dn_dirichlet = 0.0; // ||a^-1/2 grad w . n||^2 on F^D
  double avg_value = 0.0;    // ||b^-1/2 {w}||^2 on F^time

  double dg_sq() const { return jump_t + endpoints + dirichlet + jump_n + jump_grad_n; }
  double dg_plus_sq() const { return dg_sq() + minus_trace + avg_grad + dn_dirichlet + avg_value; }
};

/// Trace of a broken field on one element: value and spatial gradient.
using ElementField =
    std::function<void(int elem, Point2 x, double t, Cx& value, Cvec2& gradient)>;

ElementField discrete_field(const DiscreteSolution& sol);
ElementField exact_field(const ExactSolution& exact);
/// exact - discrete, the Galerkin error.
ElementField error_field(const ExactSolution& exact, const DiscreteSolution& sol);

/// All norm components by face quadrature. Independent of the assembled
/// matrices; this is the second route of the coercivity cross-check.
NormComponents norm_components(const Discretization& disc, const ElementField& w);

NormComponents dg_error(const Discretization& disc, const ExactSolution& exact,
                        const DiscreteSolution& sol);

/// ||psi(.,T) - psi_hp(.,T^-)||_{L2(Omega)}.
double l2_final_error(const Discretization& disc, const ExactSolution& exact,
                      const DiscreteSolution& sol);

/// E(t_level; psi_hp^-) = 1/2 INT |psi_hp|^2, trace from below (level >= 1).
double energy(const Discretization& disc, const DiscreteSolution& sol, int level);

/// E(0; psi_0) with the same F^0 quadrature the assembly uses.
double initial_energy(const Discretization& disc, const std::function<Cx(Point2)>& psi0);

struct EnergyLoss {
  double total = 0.0;           // delta_E + 1/2 ||psi_0 - psi_hp||^2_{F^0}
  double delta_e = 0.0;         // skeleton jumps + Dirichlet penalty
  double initial_mismatch = 0.0;
  double identity_gap = 0.0;    // |E(0) - E(T) - total| / max(E(0), total)
};

/// Dissipated energy of a homogeneous-Dirichlet run; checks the discrete
/// identity E(0; psi_0) - E(T; psi_hp) = E_loss and throws if it is violated
/// grossly (assembly bug), recording the gap otherwise.
EnergyLoss energy_loss(const Discretization& disc, const ProblemSpec& problem,
                       const DiscreteSolution& sol);

/// Least-squares slope of log(err) against log(h); needs >= 2 levels.
double fit_rate(const std::vector<std::pair<double, double>>& h_and_error);
std::vector<double> pairwise_rates(const std::vector<std::pair<double, double>>& h_and_error);

struct RunRecord {
  std::string benchmark;
  int p = 0;
  double h_x = 0.0, h_t = 0.0;
  int dofs = 0;         // per slab
  int slabs = 0;
  double dg_err = 0.0;
  double l2_final = 0.0;
  double e_loss = -1.0;  // negative: not applicable (g_D != 0)
  double kappa2 = 0.0;
  double identity_gap = 0.0;
  double max_residual = 0.0;
};

struct FamilyRates {
  int p = 0;
  double rate_dg = 0.0;
  double rate_l2 = 0.0;
  double rate_eloss = 0.0;
  double rate_kappa = 0.0;
};

struct ErrorReport {
  std::vector<RunRecord> runs;
  std::vector<FamilyRates> rates;
};

}  // namespace tdg
