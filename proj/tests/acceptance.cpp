// Acceptance suite: one PASS/FAIL line per criterion, plus indented detail lines.
// Exit status is 0 once every criterion has been evaluated; pass --strict to make
// any FAIL line produce a nonzero exit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cdfpen/admm.hpp"
#include "cdfpen/cli.hpp"
#include "cdfpen/path.hpp"
#include "cdfpen/penalties.hpp"
#include "cdfpen/prox.hpp"
#include "cdfpen/simulation.hpp"
#include "test_support.hpp"

using namespace cdfpen;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double seconds) {
  std::ostringstream head;
  head << (o.pass ? "PASS" : "FAIL") << "  " << id << "  " << name << "  " << o.summary;
  head.precision(3);
  head << "  [" << std::fixed << seconds << " s]";
  std::cout << head.str() << '\n';
  for (const auto& d : o.details) std::cout << "      " << d << '\n';
  std::cout.flush();
  if (!o.pass) ++failures;
}

template <typename Fn>
void criterion(int id, const std::string& name, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o.pass = false;
    o.summary = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, name, o, secs);
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PenaltyConfig random_config(std::mt19937_64& rng, PenaltyKind kind, double lambda) {
  std::uniform_real_distribution<double> un(0.1, 5.0);
  switch (kind) {
    case PenaltyKind::Cdf: return PenaltyConfig::cdf(lambda, un(rng));
    case PenaltyKind::Lasso: return PenaltyConfig::lasso(lambda);
    case PenaltyKind::Scad: return PenaltyConfig::scad(lambda);
    case PenaltyKind::Mcp: return PenaltyConfig::mcp(lambda);
  }
  return PenaltyConfig::lasso(lambda);
}

constexpr PenaltyKind kKinds[] = {PenaltyKind::Cdf, PenaltyKind::Lasso, PenaltyKind::Scad,
                                  PenaltyKind::Mcp};

// Toeplitz n=50, p=100 design used by criteria 4 and 5.
Replicate toeplitz_dataset() {
  Scenario sc;
  sc.sigma = 0.5;
  sc.seed = 20240501;
  return gen_replicate(sc, 0);
}

Outcome prox_oracle() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_real_distribution<double> uv(-10.0, 10.0), ut(0.1, 10.0), ul(0.01, 2.0);
  const int grid = 1000000;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = -std::numeric_limits<double>::infinity();
  std::string worst_cfg;
  for (int i = 0; i < 1000; ++i) {
    const PenaltyKind k = kKinds[kind(rng)];
    const double v = uv(rng), tau = ut(rng), lambda = ul(rng);
    const PenaltyConfig cfg = random_config(rng, k, lambda);
    const double z = prox_scalar({v, tau, cfg});
    auto obj = [&](double w) { return (w - v) * (w - v) / (2.0 * tau) + penalty_value(cfg, w); };
    const double half = 2.0 * std::abs(v) + 1.0;
    double best = std::numeric_limits<double>::infinity();
    for (int g = 0; g < grid; ++g) best = std::min(best, obj(-half + 2.0 * half * g / (grid - 1)));
    const double gap = obj(z) - best;
    if (gap > worst) {
      worst = gap;
      worst_cfg = cfg.describe() + " v=" + num(v) + " tau=" + num(tau);
    }
  }
  const double secs = elapsed_since(t0);
  Outcome o;
  o.pass = worst <= 1e-9 && secs < 60.0;
  o.summary = "max(objective(prox) - grid min) = " + num(worst) + " (tol 1e-9), runtime " +
              num(secs) + " s (limit 60 s)";
  o.details.push_back("worst case: " + worst_cfg);
  return o;
}

Outcome thresholding() {
  // Asserted where every prox subproblem is convex: CDF with nu >= nu_min(lambda, 1/tau),
  // SCAD with tau < gamma - 1, MCP with tau < gamma. Outside that regime the zero set of a
  // nonconvex prox is wider than |v| <= tau*lambda; those counts are reported below.
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> ul(0.01, 2.0), ut(0.1, 2.6), ut_all(0.1, 10.0),
      un(1.0, 5.0), un_all(0.1, 5.0);
  int checked = 0, violations = 0;
  std::string first;
  for (int i = 0; i < 200; ++i) {
    const double lambda = ul(rng), tau = ut(rng);
    const double nu = nu_min(lambda, 1.0 / tau) * un(rng);
    for (const auto& cfg : {PenaltyConfig::cdf(lambda, nu), PenaltyConfig::lasso(lambda),
                            PenaltyConfig::scad(lambda), PenaltyConfig::mcp(lambda)}) {
      const double t = tau * d_zero_plus(cfg);
      for (double sgn : {1.0, -1.0}) {
        const bool in_ok = prox_scalar({sgn * t * (1 - 1e-6), tau, cfg}) == 0.0;
        const bool out_ok = prox_scalar({sgn * t * (1 + 1e-6), tau, cfg}) != 0.0;
        checked += 2;
        if (!in_ok || !out_ok) {
          ++violations;
          if (first.empty()) first = cfg.describe() + " tau=" + num(tau);
        }
      }
    }
  }
  int unrestricted = 0, unrestricted_checked = 0;
  std::mt19937_64 rng2(2003);
  for (int i = 0; i < 200; ++i) {
    const double lambda = ul(rng2), tau = ut_all(rng2), nu = un_all(rng2);
    for (const auto& cfg : {PenaltyConfig::cdf(lambda, nu), PenaltyConfig::lasso(lambda),
                            PenaltyConfig::scad(lambda), PenaltyConfig::mcp(lambda)}) {
      const double t = tau * lambda;
      ++unrestricted_checked;
      if (prox_scalar({t * (1 - 1e-6), tau, cfg}) != 0.0 ||
          prox_scalar({t * (1 + 1e-6), tau, cfg}) == 0.0) {
        ++unrestricted;
      }
    }
  }
  Outcome o;
  o.pass = violations == 0;
  o.summary = std::to_string(violations) + " violations in " + std::to_string(checked) +
              " straddle checks over 200 convex-regime configs x 4 kinds";
  if (!first.empty()) o.details.push_back("first violation: " + first);
  o.details.push_back("not asserted: unrestricted draws (tau in [0.1,10], nu in [0.1,5]) violate in " +
                      std::to_string(unrestricted) + " of " + std::to_string(unrestricted_checked) +
                      " configs; a nonconvex prox zeroes beyond tau*lambda");
  return o;
}

Outcome unbiasedness() {
  Outcome o;
  o.pass = true;
  std::ostringstream s;
  for (const auto& cfg : {PenaltyConfig::cdf(1.0, 0.5), PenaltyConfig::scad(1.0), PenaltyConfig::mcp(1.0)}) {
    const double gap = std::abs(prox_scalar({10.0, 1.0, cfg}) - 10.0);
    o.pass = o.pass && gap < 1e-4;
    s << to_string(cfg.kind()) << " gap " << num(gap) << "; ";
  }
  const double lasso_gap = std::abs(prox_scalar({10.0, 1.0, PenaltyConfig::lasso(1.0)}) - 10.0);
  o.pass = o.pass && std::abs(lasso_gap - 1.0) <= 1e-10;
  s << "lasso gap " << num(lasso_gap) << " (expected 1 within 1e-10)";
  o.summary = s.str() + " (tol 1e-4)";
  return o;
}

Outcome lasso_limit() {
  const Replicate rep = toeplitz_dataset();
  const StandardizedDesign d = standardize(rep.data);
  PathSpec lasso;
  lasso.kind = PenaltyKind::Lasso;
  PathSpec cdf;
  cdf.kind = PenaltyKind::Cdf;
  cdf.nu_rule = NuFixed{1e3};
  const AdmmConfig acfg;
  const auto a = fit_path(d, lasso, acfg);
  const auto b = fit_path(d, cdf, acfg);
  double worst = 0.0, worst_std = 0.0;
  std::size_t at = 0;
  for (std::size_t k = 0; k < a.fits.size(); ++k) {
    if (a.lambdas(static_cast<Eigen::Index>(k)) != b.lambdas(static_cast<Eigen::Index>(k))) {
      throw std::runtime_error("grids differ");
    }
    const double gap = (a.fits[k].beta - b.fits[k].beta).cwiseAbs().maxCoeff();
    worst_std = std::max(worst_std, (a.fits[k].beta_std - b.fits[k].beta_std).cwiseAbs().maxCoeff());
    if (gap > worst) {
      worst = gap;
      at = k;
    }
  }
  Outcome o;
  o.pass = worst <= 1e-4;
  o.summary = "max l_inf gap over " + std::to_string(a.fits.size()) + " shared lambdas = " + num(worst) +
              " (tol 1e-4)";
  o.details.push_back("worst at lambda index " + std::to_string(at) + "; standardized-scale gap " + num(worst_std));
  return o;
}

struct UniqResult {
  double worst = 0.0;
  int lambdas_disagreeing = 0;
  std::vector<std::string> lines;
};

UniqResult uniqueness_run(const StandardizedDesign& d, double nu_divisor) {
  const AdmmConfig acfg;
  const double floor = convexity_floor(d, acfg.rho);
  const Eigen::VectorXd grid = lambda_grid(lambda_max(d), PathSpec{});
  std::mt19937_64 rng(5005);
  std::normal_distribution<double> g;
  UniqResult out;
  for (int i = 0; i < 10; ++i) {
    const double lambda = grid(5 + 10 * i);
    const double nu = nu_for_lambda(lambda, NuMin{}, floor) / nu_divisor;
    const auto cfg = PenaltyConfig::cdf(lambda, nu);
    Eigen::VectorXd ref;
    double lw = 0.0;
    int nonconverged = 0;
    for (int r = 0; r < 20; ++r) {
      AdmmState s = cold_start(d, acfg.rho);
      for (Eigen::Index j = 0; j < d.p(); ++j) {
        s.z(j) = g(rng);
        s.u(j) = g(rng);
      }
      const auto fr = fit(d, cfg, acfg, s);
      nonconverged += fr.converged ? 0 : 1;
      if (r == 0) {
        ref = fr.beta_std;
      } else {
        lw = std::max(lw, (fr.beta_std - ref).cwiseAbs().maxCoeff());
      }
    }
    out.worst = std::max(out.worst, lw);
    if (lw > 1e-6) ++out.lambdas_disagreeing;
    out.lines.push_back("lambda/lambda_max=" + num(grid(5 + 10 * i) / grid(0)) + " nu=" + num(nu) +
                        " spread=" + num(lw) + " nonconverged=" + std::to_string(nonconverged) + "/20");
  }
  return out;
}

Outcome uniqueness() {
  const Replicate rep = toeplitz_dataset();
  const StandardizedDesign d = standardize(rep.data);
  const UniqResult main = uniqueness_run(d, 1.0);
  const UniqResult tenth = uniqueness_run(d, 10.0);
  Outcome o;
  o.pass = main.worst <= 1e-6;
  o.summary = "nu_min: max spread over 20 random (z,u) starts = " + num(main.worst) + " (tol 1e-6), " +
              std::to_string(main.lambdas_disagreeing) + "/10 lambdas disagree";
  o.details = main.lines;
  o.details.push_back("recorded, not asserted: nu_min/10 spread = " + num(tenth.worst) + ", " +
                      std::to_string(tenth.lambdas_disagreeing) + "/10 lambdas disagree (expected >= 1)");
  o.details.push_back("n=50 < p=100: X'X/n is singular, so the floor is rho and only the z-step is convex");
  return o;
}

Outcome orthonormal() {
  const Eigen::Index n = 64, p = 8;
  const Eigen::MatrixXd x = test_support::orthonormal_design(n, p, 606);
  Eigen::VectorXd beta(p);
  beta << 2.5, -1.8, 0.6, 0.0, 0.0, -0.3, 1.2, 0.05;
  const Eigen::VectorXd y = x * beta + 0.4 * test_support::gaussian_matrix(n, 1, 607);
  const auto d = standardize(Dataset(x, y));
  const Eigen::VectorXd v = d.xs().transpose() * d.y_centered() / static_cast<double>(n);
  AdmmConfig acfg;
  acfg.tol_primal = acfg.tol_dual = 1e-12;
  acfg.max_iter = 100000;
  double worst = 0.0;
  std::ostringstream s;
  for (double lambda : {0.15, 0.5}) {
    const double floor = convexity_floor(d, acfg.rho);
    for (const auto& cfg : {PenaltyConfig::cdf(lambda, nu_min(lambda, floor)), PenaltyConfig::lasso(lambda),
                            PenaltyConfig::scad(lambda), PenaltyConfig::mcp(lambda)}) {
      const auto fr = fit(d, cfg, acfg);
      double gap = 0.0;
      for (Eigen::Index j = 0; j < p; ++j) gap = std::max(gap, std::abs(fr.beta_std(j) - prox_scalar({v(j), 1.0, cfg})));
      worst = std::max(worst, gap);
    }
  }
  Outcome o;
  o.pass = worst <= 1e-8;
  o.summary = "max |z_j - prox(x_j'y/n)| over 4 penalties x 2 lambdas = " + num(worst) + " (tol 1e-8)";
  return o;
}

Outcome lambda_max_check() {
  int bad_zero = 0, bad_active = 0, total = 0;
  const double sigmas[] = {0.25, 0.5, 0.75, 1.0};
  for (int seed = 1; seed <= 20; ++seed) {
    Scenario sc;
    sc.seed = static_cast<std::uint64_t>(seed);
    sc.sigma = sigmas[seed % 4];
    const Replicate rep = gen_replicate(sc, 0);
    const StandardizedDesign d = standardize(rep.data);
    const AdmmConfig acfg;
    const double lmax = lambda_max(d);
    const double floor = convexity_floor(d, acfg.rho);
    for (PenaltyKind kind : kKinds) {
      PathSpec spec;
      spec.kind = kind;
      ++total;
      if (fit(d, penalty_at(spec, lmax, floor), acfg).nonzeros() != 0) ++bad_zero;
      if (fit(d, penalty_at(spec, 0.9 * lmax, floor), acfg).nonzeros() < 1) ++bad_active;
    }
  }
  Outcome o;
  o.pass = bad_zero == 0 && bad_active == 0;
  o.summary = "20 seeds x 4 penalties: " + std::to_string(bad_zero) + " nonzero fits at lambda_max, " +
              std::to_string(bad_active) + " empty fits at 0.9 lambda_max (of " + std::to_string(total) + ")";
  return o;
}

std::vector<ScenarioReport> scaled_reports;

void run_scaled_study() {
  if (!scaled_reports.empty()) return;
  const std::vector<Method> methods{parse_method("scad"), parse_method("mcp"), parse_method("cdf-numin")};
  const int threads = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  for (double sigma : {0.25, 0.5, 0.75, 1.0}) {
    Scenario sc;
    sc.name = "scaled";
    sc.sigma = sigma;
    sc.n_replicates = 50;
    sc.seed = 1;
    scaled_reports.push_back(run_scenario(sc, methods, PathSpec{}, AdmmConfig{}, threads));
  }
}

const MethodReport& method(const ScenarioReport& r, const std::string& label) {
  for (const auto& m : r.methods) {
    if (m.method.label == label) return m;
  }
  throw std::runtime_error("missing method " + label);
}

Outcome scaled_auc() {
  const auto t0 = std::chrono::steady_clock::now();
  run_scaled_study();
  const double secs = elapsed_since(t0);
  Outcome o;
  o.pass = true;
  double worst = 0.0;
  for (const auto& r : scaled_reports) {
    const auto& cdf = method(r, "cdf-numin");
    const auto& mcp = method(r, "mcp");
    const auto& scad = method(r, "scad");
    const double gap = std::abs(cdf.mean_auc - mcp.mean_auc);
    worst = std::max(worst, gap);
    o.pass = o.pass && gap < 0.08 && cdf.failures == 0 && mcp.failures == 0;
    o.details.push_back("sigma=" + num(r.scenario.sigma) + ": AUC cdf-numin " + num(cdf.mean_auc) + ", mcp " +
                        num(mcp.mean_auc) + ", scad " + num(scad.mean_auc) + "; failures " +
                        std::to_string(cdf.failures + mcp.failures + scad.failures) + ", nonconverged fits " +
                        std::to_string(cdf.nonconverged_fits + mcp.nonconverged_fits + scad.nonconverged_fits));
  }
  o.summary = "max |mean AUC(cdf-numin) - mean AUC(mcp)| = " + num(worst) + " (tol 0.08), 50 replicates, study " +
              num(secs) + " s";
  o.pass = o.pass && secs < 600.0;
  return o;
}

Outcome scaled_mse() {
  run_scaled_study();
  Outcome o;
  o.pass = true;
  double worst = 1.0;
  for (const auto& r : scaled_reports) {
    auto min_mse = [&](const std::string& label) {
      const auto& m = method(r, label).mean_mse;
      return *std::min_element(m.begin(), m.end());
    };
    const double cdf = min_mse("cdf-numin"), scad = min_mse("scad"), mcp = min_mse("mcp");
    for (double other : {scad, mcp}) {
      const double ratio = std::max(cdf / other, other / cdf);
      worst = std::max(worst, ratio);
      o.pass = o.pass && ratio <= 1.5;
    }
    o.details.push_back("sigma=" + num(r.scenario.sigma) + ": min mean MSE cdf-numin " + num(cdf) + ", scad " +
                        num(scad) + ", mcp " + num(mcp));
  }
  o.summary = "largest min-MSE ratio between cdf-numin and scad/mcp = " + num(worst) + " (limit 1.5)";
  return o;
}

Outcome derivative_consistency() {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> ub(0.1, 10.0), ul(0.01, 2.0);
  const double h = 1e-6;
  double worst = 0.0, worst2 = 0.0;
  for (PenaltyKind kind : kKinds) {
    for (int i = 0; i < 100; ++i) {
      const double b = ub(rng);
      const PenaltyConfig cfg = random_config(rng, kind, ul(rng));
      const double fd = (penalty_value(cfg, b + h) - penalty_value(cfg, b - h)) / (2 * h);
      worst = std::max(worst, std::abs(penalty_derivative(cfg, b) - fd));
      if (kind == PenaltyKind::Cdf) {
        const double fd2 = (penalty_derivative(cfg, b + h) - penalty_derivative(cfg, b - h)) / (2 * h);
        worst2 = std::max(worst2, std::abs(cdf_second_derivative(cfg, b) - fd2));
      }
    }
  }
  Outcome o;
  o.pass = worst <= 1e-6 && worst2 <= 1e-6;
  o.summary = "max |p' - FD| = " + num(worst) + ", max |p'' - FD| (cdf) = " + num(worst2) +
              " (tol 1e-6, 100 points per kind)";
  return o;
}

std::string csv_body(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("missing output " + p.string());
  std::string line, body;
  while (std::getline(f, line)) {
    if (!line.empty() && line[0] == '#') continue;
    body += line;
    body += '\n';
  }
  return body;
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "cdfpen_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "scenario.json");
    f << R"({"sigma": [0.25, 1.0], "n_replicates": 4, "seed": 314,)"
      << R"( "methods": ["scad", "mcp", "cdf-numin", "lasso"], "n_lambda": 40})";
  }
  auto run = [&](const std::string& prefix, const std::string& threads) {
    std::ostringstream out, err;
    const int code = cli::run({"simulate", "--scenario-file", (dir / "scenario.json").string(), "--seed", "314",
                               "--threads", threads, "--output", (dir / prefix).string()},
                              out, err);
    if (code != 0) throw std::runtime_error("simulate exited " + std::to_string(code) + ": " + err.str());
  };
  run("a", "1");
  run("b", "1");
  run("c", "4");
  Outcome o;
  o.pass = true;
  for (const char* file : {"_metrics.csv", "_auc.csv"}) {
    const std::string a = csv_body(dir / (std::string("a") + file));
    const bool same_b = a == csv_body(dir / (std::string("b") + file));
    const bool same_c = a == csv_body(dir / (std::string("c") + file));
    o.pass = o.pass && same_b && same_c && !a.empty();
    o.details.push_back(std::string(file + 1) + ": repeat " + (same_b ? "identical" : "DIFFERS") +
                        ", threads 1 vs 4 " + (same_c ? "identical" : "DIFFERS") + " (" +
                        std::to_string(a.size()) + " bytes)");
  }
  o.summary = o.pass ? "CSV bodies byte-identical across repeats and thread counts" : "CSV bodies differ";
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--strict") strict = true;
  }
  criterion(1, "prox oracle equivalence", prox_oracle);
  criterion(2, "thresholding exactness", thresholding);
  criterion(3, "near-unbiasedness", unbiasedness);
  criterion(4, "LASSO limit", lasso_limit);
  criterion(5, "uniqueness under nu_min", uniqueness);
  criterion(6, "orthonormal-design closed form", orthonormal);
  criterion(7, "lambda_max correctness", lambda_max_check);
  criterion(8, "scaled AUC reproduction", scaled_auc);
  criterion(9, "MSE competitiveness", scaled_mse);
  criterion(10, "derivative consistency", derivative_consistency);
  criterion(11, "determinism", determinism);
  std::cout << (failures == 0 ? "all criteria PASS" : std::to_string(failures) + " criterion(s) FAIL") << '\n';
  return strict && failures > 0 ? 1 : 0;
}
