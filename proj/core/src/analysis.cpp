#include "tdg/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace tdg {

ElementField discrete_field(const DiscreteSolution& sol) {
  return [&sol](int elem, Point2 x, double t, Cx& value, Cvec2& gradient) {
    const WaveFunctionValue w = sol.eval_element_full(elem, x, t);
    value = w.value;
    gradient = w.gradient;
  };
}

ElementField exact_field(const ExactSolution& exact) {
  return [&exact](int, Point2 x, double t, Cx& value, Cvec2& gradient) {
    value = exact.value(x, t);
    gradient = exact.gradient(x, t);
  };
}

ElementField error_field(const ExactSolution& exact, const DiscreteSolution& sol) {
  return [&exact, &sol](int elem, Point2 x, double t, Cx& value, Cvec2& gradient) {
    const WaveFunctionValue w = sol.eval_element_full(elem, x, t);
    value = exact.value(x, t) - w.value;
    gradient = exact.gradient(x, t) - w.gradient;
  };
}

NormComponents norm_components(const Discretization& disc, const ElementField& w) {
  const SpaceTimeMesh& mesh = disc.mesh;
  NormComponents out;
  Cx va, vb;
  Cvec2 ga, gb;
  for (const Face& face : mesh.faces) {
    switch (face.tag) {
      case FaceTag::SpaceLike:
        for (const FacePoint& q : disc.quad_points(face)) {
          w(face.elem_a, q.x, q.t, va, ga);
          w(face.elem_b, q.x, q.t, vb, gb);
          out.jump_t += 0.5 * q.w * std::norm(va - vb);
          out.minus_trace += q.w * std::norm(va);
        }
        break;
      case FaceTag::Initial:
        for (const FacePoint& q : disc.quad_points(face)) {
          w(face.elem_b, q.x, q.t, vb, gb);
          out.endpoints += 0.5 * q.w * std::norm(vb);
        }
        break;
      case FaceTag::Final:
        for (const FacePoint& q : disc.quad_points(face)) {
          w(face.elem_a, q.x, q.t, va, ga);
          out.endpoints += 0.5 * q.w * std::norm(va);
        }
        break;
      case FaceTag::Dirichlet: {
        const double alpha = disc.flux.alpha(face);
        for (const FacePoint& q : disc.quad_points(face)) {
          w(face.elem_a, q.x, q.t, va, ga);
          out.dirichlet += alpha * q.w * std::norm(va);
          out.dn_dirichlet += q.w / alpha * std::norm(dot(ga, face.normal));
        }
        break;
      }
      case FaceTag::TimeLike: {
        const double alpha = disc.flux.alpha(face);
        const double beta = disc.flux.beta(face);
        for (const FacePoint& q : disc.quad_points(face)) {
          w(face.elem_a, q.x, q.t, va, ga);
          w(face.elem_b, q.x, q.t, vb, gb);
          out.jump_n += alpha * q.w * std::norm(va - vb);
          out.jump_grad_n += beta * q.w * std::norm(dot(ga - gb, face.normal));
          const Cvec2 avg_g = 0.5 * (ga + gb);
          out.avg_grad += q.w / alpha * squared_norm(avg_g);
          out.avg_value += q.w / beta * std::norm(0.5 * (va + vb));
        }
        break;
      }
    }
  }
  return out;
}

NormComponents dg_error(const Discretization& disc, const ExactSolution& exact,
                        const DiscreteSolution& sol) {
  return norm_components(disc, error_field(exact, sol));
}

double l2_final_error(const Discretization& disc, const ExactSolution& exact,
                      const DiscreteSolution& sol) {
  const SpaceTimeMesh& mesh = disc.mesh;
  double err_sq = 0.0;
  for (int fid : mesh.level_faces[mesh.n_slabs()]) {
    const Face& face = mesh.faces[fid];
    for (const FacePoint& q : disc.quad_points(face)) {
      const Cx diff = exact.value(q.x, q.t) - sol.eval_element(face.elem_a, q.x, q.t);
      err_sq += q.w * std::norm(diff);
    }
  }
  return std::sqrt(err_sq);
}

double energy(const Discretization& disc, const DiscreteSolution& sol, int level) {
  if (level < 1 || level > disc.mesh.n_slabs())
    throw std::invalid_argument("energy: level must be a slab boundary >= 1");
  double e = 0.0;
  for (int fid : disc.mesh.level_faces[level]) {
    const Face& face = disc.mesh.faces[fid];
    for (const FacePoint& q : disc.quad_points(face))
      e += 0.5 * q.w * std::norm(sol.eval_element(face.elem_a, q.x, q.t));
  }
  return e;
}

double initial_energy(const Discretization& disc, const std::function<Cx(Point2)>& psi0) {
  double e = 0.0;
  for (int fid : disc.mesh.level_faces[0]) {
    const Face& face = disc.mesh.faces[fid];
    for (const FacePoint& q : disc.quad_points(face)) e += 0.5 * q.w * std::norm(psi0(q.x));
  }
  return e;
}

EnergyLoss energy_loss(const Discretization& disc, const ProblemSpec& problem,
                       const DiscreteSolution& sol) {
  if (!problem.homogeneous_dirichlet)
    throw std::invalid_argument("energy_loss: defined for homogeneous Dirichlet data only");

  const NormComponents comps = norm_components(disc, discrete_field(sol));
  EnergyLoss loss;
  loss.delta_e = comps.jump_t + comps.dirichlet + comps.jump_n + comps.jump_grad_n;

  for (int fid : disc.mesh.level_faces[0]) {
    const Face& face = disc.mesh.faces[fid];
    for (const FacePoint& q : disc.quad_points(face)) {
      const Cx diff = problem.initial(q.x) - sol.eval_element(face.elem_b, q.x, q.t);
      loss.initial_mismatch += 0.5 * q.w * std::norm(diff);
    }
  }
  loss.total = loss.delta_e + loss.initial_mismatch;

  const double e0 = initial_energy(disc, problem.initial);
  const double eT = energy(disc, sol, disc.mesh.n_slabs());
  loss.identity_gap = std::abs(e0 - eT - loss.total) / std::max({e0, loss.total, 1e-300});
  if (loss.identity_gap > 1e-6)
    throw std::runtime_error("energy_loss: dissipation identity violated (gap " +
                             std::to_string(loss.identity_gap) + "), assembly inconsistency");
  return loss;
}

double fit_rate(const std::vector<std::pair<double, double>>& h_and_error) {
  if (h_and_error.size() < 2) throw std::invalid_argument("fit_rate: need at least 2 levels");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [h, e] : h_and_error) {
    if (!(h > 0.0) || !(e > 0.0))
      throw std::invalid_argument("fit_rate: h and errors must be positive");
    const double x = std::log(h), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(h_and_error.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> pairwise_rates(const std::vector<std::pair<double, double>>& h_and_error) {
  std::vector<double> rates;
  for (size_t i = 1; i < h_and_error.size(); ++i) {
    auto [h0, e0] = h_and_error[i - 1];
    auto [h1, e1] = h_and_error[i];
    rates.push_back(std::log(e1 / e0) / std::log(h1 / h0));
  }
  return rates;
}

}  // namespace tdg
