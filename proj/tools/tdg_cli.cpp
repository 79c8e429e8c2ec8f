// Command-line driver: convergence studies, single solves, Taylor-matching
// rank checks and slab-matrix conditioning reports.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdg/runner.hpp"
#include "tdg/taylor.hpp"

namespace {

void add_run_options(CLI::App* cmd, tdg::RunConfig& config, std::string& k_mode,
                     std::string& config_path) {
  cmd->add_option("--benchmark", config.benchmark, "square-well | gaussian");
  cmd->add_option("--v-star", config.v_star, "well depth V* (square-well)");
  cmd->add_option("--p", config.p_list, "degree list")->delimiter(',');
  cmd->add_option("--divisions", config.divisions, "per-axis cell counts")->delimiter(',');
  cmd->add_option("--ht-ratio", config.ht_ratio, "h_t / h_x ratio");
  cmd->add_option("--k-mode", k_mode, "equispaced | tuned")
      ->check(CLI::IsMember({"equispaced", "tuned"}));
  cmd->add_option("--k-star", config.k_star, "tuned-mode wavenumber (0 = bound state)");
  cmd->add_option("--quad", config.quad_override, "override quadrature nodes per axis");
  cmd->add_option("--alpha-scale", config.alpha_scale, "scale on the alpha flux parameter");
  cmd->add_option("--beta-scale", config.beta_scale, "scale on the beta flux parameter");
  cmd->add_option("--out", config.out_dir, "output directory");
  cmd->add_option("--seed", config.seed, "seed for randomized diagnostics");
  cmd->add_option("--config", config_path, "flat key=value config file; flags win");
}

tdg::KMode parse_mode(const std::string& s) {
  return s == "tuned" ? tdg::KMode::Tuned : tdg::KMode::Equispaced;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

// Flat key=value file; '#' starts a comment. Explicit flags win, so a key is
// applied only when the corresponding flag was not given on the command line.
void apply_config_file(const std::string& path, const CLI::App* cmd,
                       tdg::RunConfig& config, std::string& k_mode) {
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error("cannot read config file " + path);
  auto overridden = [&](const char* flag) { return cmd->count(flag) > 0; };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const size_t eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const size_t a = s.find_first_not_of(" \t\r");
      const size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    for (char& c : key)
      if (c == '-') c = '_';

    if (key == "benchmark" && !overridden("--benchmark")) config.benchmark = value;
    else if (key == "v_star" && !overridden("--v-star")) config.v_star = std::stod(value);
    else if (key == "p" && !overridden("--p")) config.p_list = parse_int_list(value);
    else if (key == "divisions" && !overridden("--divisions"))
      config.divisions = parse_int_list(value);
    else if (key == "ht_ratio" && !overridden("--ht-ratio")) config.ht_ratio = std::stod(value);
    else if (key == "k_mode" && !overridden("--k-mode")) k_mode = value;
    else if (key == "k_star" && !overridden("--k-star")) config.k_star = std::stod(value);
    else if (key == "quad" && !overridden("--quad")) config.quad_override = std::stoi(value);
    else if (key == "alpha_scale" && !overridden("--alpha-scale"))
      config.alpha_scale = std::stod(value);
    else if (key == "beta_scale" && !overridden("--beta-scale"))
      config.beta_scale = std::stod(value);
    else if (key == "out" && !overridden("--out")) config.out_dir = value;
    else if (key == "seed" && !overridden("--seed"))
      config.seed = static_cast<unsigned>(std::stoul(value));
    else if (key != "benchmark" && key != "v_star" && key != "p" && key != "divisions" &&
             key != "ht_ratio" && key != "k_mode" && key != "k_star" && key != "quad" &&
             key != "alpha_scale" && key != "beta_scale" && key != "out" && key != "seed")
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" +
                               key + "'");
  }
}

int cmd_taylor_check(int d, int p, const std::vector<double>& params) {
  using namespace tdg;
  BasisSpec basis;
  if (d == 1)
    basis = params.empty() ? default_basis(1, p, KMode::Equispaced)
                           : basis_from_wavenumbers(params);
  else
    basis = default_basis(2, p, KMode::Equispaced);

  const RankResult rank = check_rank(basis, 0.0, p);
  const int expected = d == 1 ? 2 * p + 1 : (p + 1) * (p + 1);
  std::printf("taylor-check d=%d p=%d: rank %d / expected %d, sigma_min %.3e, sigma_max %.3e\n",
              d, p, rank.rank, expected, rank.sigma_min, rank.sigma_max);

  // match a Trefftz target that is not in the span: offset wavenumbers
  const Point2 z{0.3, d == 2 ? -0.2 : 0.0};
  const double s = 0.15;
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(taylor_matrix(basis, 0.0, z, s, p).rows());
  if (d == 1) {
    BasisSpec probe = basis_from_wavenumbers({-p - 0.5, 0.25, p + 0.5});
    for (int l = 0; l < probe.size(); ++l)
      b += basis_taylor_coeffs(probe, l, 0.0, z, s, p) * Cx(1.0 + l, -0.5 * l);
  } else {
    BasisSpec probe = default_basis(2, 1, KMode::Equispaced);
    for (double& k : probe.k) k += 0.37;
    for (int l = 0; l < probe.size(); ++l)
      b += basis_taylor_coeffs(probe, l, 0.0, z, s, p) * Cx(0.4 * l - 1.0, 0.3);
  }
  const MatchResult match = match_taylor(basis, 0.0, z, s, p, b);
  std::printf("  match residual (off-span local solution): %.3e\n", match.residual);

  Eigen::VectorXcd b_member = basis_taylor_coeffs(basis, 0, 0.0, z, s, p);
  const MatchResult member = match_taylor(basis, 0.0, z, s, p, b_member);
  std::printf("  match residual (basis member):            %.3e\n", member.residual);
  if (d == 2) {
    const SFactors f = s_factors(basis, 0.0, p);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f.s);
    std::printf("  S matrix: %ld x %ld, sigma_min %.3e\n", static_cast<long>(f.s.rows()),
                static_cast<long>(f.s.cols()),
                svd.singularValues()(svd.singularValues().size() - 1));
  }
  return rank.full_rank && match.residual < 1e-8 ? 0 : 1;
}

int cmd_condition(tdg::RunConfig config) {
  using namespace tdg;
  const ProblemSpec problem = benchmark_problem(config);
  std::vector<std::pair<double, double>> pts;
  std::printf("#   h_x        kappa2\n");
  for (int div : config.divisions) {
    const Discretization disc =
        benchmark_discretization(config, problem, config.p_list.front(), div);
    const double kappa = condition_number(assemble_slab_matrix(disc, 0));
    pts.emplace_back(disc.mesh.space.h_max, kappa);
    std::printf("%10.6f  %.6e\n", disc.mesh.space.h_max, kappa);
  }
  if (pts.size() >= 2) std::printf("log-log slope: %+.3f\n", fit_rate(pts));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"space-time Trefftz-DG solver for the time-dependent Schroedinger equation"};
  app.require_subcommand(1);

  tdg::RunConfig config;
  std::string k_mode = "equispaced";
  std::string config_path;

  CLI::App* solve = app.add_subcommand("solve", "single run, sampled solution CSV");
  add_run_options(solve, config, k_mode, config_path);
  CLI::App* conv = app.add_subcommand("convergence", "h-convergence study, error CSV");
  add_run_options(conv, config, k_mode, config_path);
  CLI::App* cond = app.add_subcommand("condition", "slab-matrix condition numbers");
  add_run_options(cond, config, k_mode, config_path);

  CLI::App* taylor = app.add_subcommand("taylor-check", "Taylor-matching rank oracle");
  int d = 1, p = 2;
  std::vector<double> params;
  taylor->add_option("--d", d, "space dimension")->check(CLI::IsMember({1, 2}));
  taylor->add_option("--p", p, "degree");
  taylor->add_option("--params", params, "custom wavenumbers (d=1)")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      const CLI::App* active = solve->parsed() ? solve : conv->parsed() ? conv : cond;
      apply_config_file(config_path, active, config, k_mode);
    }
    config.k_mode = parse_mode(k_mode);
    if (solve->parsed()) {
      tdg::run_solve(config);
      std::printf("wrote %s\n", tdg::solution_csv_path(config).c_str());
      return 0;
    }
    if (conv->parsed()) {
      const tdg::ErrorReport report = tdg::run_convergence(config);
      for (const auto& r : report.rates)
        std::printf("p=%d: rate_dg %+.3f, rate_l2 %+.3f\n", r.p, r.rate_dg, r.rate_l2);
      std::printf("wrote %s\n", tdg::convergence_csv_path(config).c_str());
      return 0;
    }
    if (cond->parsed()) return cmd_condition(config);
    if (taylor->parsed()) return cmd_taylor_check(d, p, params);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
