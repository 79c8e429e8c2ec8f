#include "tdg/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace tdg {

namespace {

// scientific, 16 significant digits, '.' decimal
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15e", v);
  return buf;
}

struct CsvFile {
  std::FILE* f = nullptr;
  explicit CsvFile(const std::string& path) : f(std::fopen(path.c_str(), "w")) {
    if (!f) throw std::runtime_error("cannot open " + path);
  }
  ~CsvFile() {
    if (f) std::fclose(f);
  }
  void line(const std::string& s) {
    std::fputs(s.c_str(), f);
    std::fputc('\n', f);
    std::fflush(f);
  }
};

}  // namespace

void validate_config(const RunConfig& config) {
  if (config.benchmark != "square-well" && config.benchmark != "gaussian")
    throw std::invalid_argument("config: unknown benchmark '" + config.benchmark + "'");
  if (config.p_list.empty()) throw std::invalid_argument("config: empty p list");
  for (int p : config.p_list)
    if (p < 1) throw std::invalid_argument("config: p must be >= 1");
  if (config.divisions.empty()) throw std::invalid_argument("config: empty division list");
  for (int d : config.divisions)
    if (d < 1) throw std::invalid_argument("config: divisions must be >= 1");
  if (config.ht_ratio <= 0.0) throw std::invalid_argument("config: ht_ratio must be > 0");
  if (config.benchmark == "square-well" && config.v_star <= 0.0)
    throw std::invalid_argument("config: v_star must be > 0");
}

ProblemSpec benchmark_problem(const RunConfig& config) {
  validate_config(config);
  if (config.benchmark == "square-well") return square_well_problem(config.v_star);
  return gaussian_problem();
}

SpaceTimeMesh benchmark_mesh(const RunConfig& config, const ProblemSpec& problem,
                             int divisions) {
  const CellShape shape = problem.dim == 1 ? CellShape::Interval : config.shape_2d;
  // provisional spatial mesh fixes h_x, which sets the slab count
  SpaceTimeMesh probe = build_mesh(problem.bounds, divisions, divisions, 1,
                                   problem.final_time, shape);
  const double hx = probe.space.h_max;
  const int slabs =
      std::max(1, static_cast<int>(std::lround(problem.final_time / (config.ht_ratio * hx))));
  return build_mesh(problem.bounds, divisions, divisions, slabs, problem.final_time, shape);
}

BasisSpec benchmark_basis(const RunConfig& config, const ProblemSpec& problem, int p) {
  if (config.k_mode == KMode::Tuned) {
    double ks = config.k_star;
    if (ks <= 0.0) {
      if (problem.name != "square-well")
        throw std::invalid_argument("config: tuned mode needs --k-star for this benchmark");
      ks = bound_state_wavenumber(config.v_star);
    }
    return default_basis(problem.dim, p, KMode::Tuned, ks);
  }
  return default_basis(problem.dim, p, KMode::Equispaced);
}

Discretization benchmark_discretization(const RunConfig& config, const ProblemSpec& problem,
                                        int p, int divisions) {
  FluxParameters flux{config.alpha_scale, config.beta_scale};
  QuadPolicy quad;
  quad.override_n = config.quad_override;
  return make_discretization(problem, benchmark_mesh(config, problem, divisions),
                             benchmark_basis(config, problem, p), flux, quad);
}

RunRecord run_single(const RunConfig& config, const ProblemSpec& problem, int p,
                     int divisions) {
  const Discretization disc = benchmark_discretization(config, problem, p, divisions);
  const DiscreteSolution sol = march(disc, problem);

  RunRecord rec;
  rec.benchmark = problem.name;
  rec.p = p;
  rec.h_x = disc.mesh.space.h_max;
  rec.h_t = disc.mesh.time.max_step();
  rec.dofs = disc.dofs().dim();
  rec.slabs = disc.mesh.n_slabs();
  rec.max_residual = sol.max_residual();
  if (problem.exact) {
    rec.dg_err = std::sqrt(dg_error(disc, *problem.exact, sol).dg_sq());
    rec.l2_final = l2_final_error(disc, *problem.exact, sol);
  }
  if (problem.homogeneous_dirichlet) {
    const EnergyLoss loss = energy_loss(disc, problem, sol);
    rec.e_loss = loss.total;
    rec.identity_gap = loss.identity_gap;
  }
  if (config.with_condition_number)
    rec.kappa2 = condition_number(assemble_slab_matrix(disc, 0));
  return rec;
}

std::string convergence_csv_path(const RunConfig& config) {
  return (std::filesystem::path(config.out_dir) / "convergence.csv").string();
}

std::string solution_csv_path(const RunConfig& config) {
  return (std::filesystem::path(config.out_dir) / "solution.csv").string();
}

ErrorReport run_convergence(const RunConfig& config) {
  validate_config(config);
  const ProblemSpec problem = benchmark_problem(config);
  std::filesystem::create_directories(config.out_dir);
  CsvFile csv(convergence_csv_path(config));
  csv.line("benchmark,p,h_x,h_t,dofs,slabs,dg_err,l2T_err,e_loss,kappa2,rate_dg,rate_l2");

  ErrorReport report;
  for (int p : config.p_list) {
    std::vector<std::pair<double, double>> dg_pts, l2_pts, el_pts, kp_pts;
    for (int div : config.divisions) {
      const RunRecord rec = run_single(config, problem, p, div);
      report.runs.push_back(rec);
      const double h = std::max(rec.h_x, rec.h_t);
      if (rec.dg_err > 0.0) dg_pts.emplace_back(h, rec.dg_err);
      if (rec.l2_final > 0.0) l2_pts.emplace_back(h, rec.l2_final);
      if (rec.e_loss > 0.0) el_pts.emplace_back(h, rec.e_loss);
      if (rec.kappa2 > 0.0) kp_pts.emplace_back(h, rec.kappa2);
      csv.line(rec.benchmark + "," + std::to_string(p) + "," + fmt(rec.h_x) + "," +
               fmt(rec.h_t) + "," + std::to_string(rec.dofs) + "," +
               std::to_string(rec.slabs) + "," + fmt(rec.dg_err) + "," + fmt(rec.l2_final) +
               "," + (rec.e_loss >= 0.0 ? fmt(rec.e_loss) : "") + "," +
               (rec.kappa2 > 0.0 ? fmt(rec.kappa2) : "") + ",,");
    }
    FamilyRates rates;
    rates.p = p;
    if (dg_pts.size() >= 2) rates.rate_dg = fit_rate(dg_pts);
    if (l2_pts.size() >= 2) rates.rate_l2 = fit_rate(l2_pts);
    if (el_pts.size() >= 2) rates.rate_eloss = fit_rate(el_pts);
    if (kp_pts.size() >= 2) rates.rate_kappa = fit_rate(kp_pts);
    report.rates.push_back(rates);
    csv.line(problem.name + "," + std::to_string(p) + ",,,,,,,,," + fmt(rates.rate_dg) + "," +
             fmt(rates.rate_l2));
  }
  return report;
}

void run_solve(const RunConfig& config) {
  validate_config(config);
  const ProblemSpec problem = benchmark_problem(config);
  const int p = config.p_list.front();
  const int div = config.divisions.front();
  const Discretization disc = benchmark_discretization(config, problem, p, div);
  const DiscreteSolution sol = march(disc, problem);

  std::filesystem::create_directories(config.out_dir);
  CsvFile csv(solution_csv_path(config));
  const int ns = config.solve_samples;
  const int nt = disc.mesh.n_slabs() + 1;
  const Box2& b = problem.bounds;
  if (problem.dim == 1) {
    csv.line("x,t,re,im");
    for (int it = 0; it < nt; ++it) {
      const double t = disc.mesh.time.knots[it];
      for (int i = 0; i < ns; ++i) {
        const double x = b.lo.x + (b.hi.x - b.lo.x) * i / (ns - 1.0);
        const Cx v = sol.eval({x, 0.0}, std::max(t, 1e-12));
        csv.line(fmt(x) + "," + fmt(t) + "," + fmt(v.real()) + "," + fmt(v.imag()));
      }
    }
  } else {
    csv.line("x,y,t,re,im");
    const int nt2 = std::min(nt, 5);
    for (int it = 0; it < nt2; ++it) {
      const double t = disc.mesh.time.knots[(static_cast<long>(it) * (nt - 1)) / std::max(1, nt2 - 1)];
      for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ns; ++j) {
          const Point2 x{b.lo.x + (b.hi.x - b.lo.x) * i / (ns - 1.0),
                         b.lo.y + (b.hi.y - b.lo.y) * j / (ns - 1.0)};
          const Cx v = sol.eval(x, std::max(t, 1e-12));
          csv.line(fmt(x.x) + "," + fmt(x.y) + "," + fmt(t) + "," + fmt(v.real()) + "," +
                   fmt(v.imag()));
        }
    }
  }
}

}  // namespace tdg
