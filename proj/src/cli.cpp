#include "cdfpen/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "cdfpen/admm.hpp"
#include "cdfpen/core_model.hpp"
#include "cdfpen/error.hpp"
#include "cdfpen/path.hpp"
#include "cdfpen/penalties.hpp"
#include "cdfpen/prox.hpp"
#include "cdfpen/report_io.hpp"
#include "cdfpen/simulation.hpp"
#include "cdfpen/svg_plot.hpp"

namespace cdfpen::cli {

namespace {

using nlohmann::json;

struct SolverFlags {
  double rho = 1.0;
  double tol = 1e-7;
  int max_iter = 10000;
  double over_relaxation = 1.5;
  bool no_adapt_rho = false;

  void add_to(CLI::App& app) {
    app.add_option("--rho", rho, "ADMM augmented-Lagrangian parameter")->capture_default_str();
    app.add_option("--tol", tol, "Primal and dual stopping tolerance")->capture_default_str();
    app.add_option("--max-iter", max_iter, "ADMM iteration budget per fit")->capture_default_str();
    app.add_option("--over-relaxation", over_relaxation, "Relaxation factor in [1, 1.8]")
        ->capture_default_str();
    app.add_flag("--no-adapt-rho", no_adapt_rho, "Keep rho fixed");
  }

  AdmmConfig config() const {
    AdmmConfig a;
    a.rho = rho;
    a.tol_primal = tol;
    a.tol_dual = tol;
    a.max_iter = max_iter;
    a.over_relaxation = over_relaxation;
    a.adapt_rho = !no_adapt_rho;
    a.validate();
    return a;
  }

  json to_json() const {
    return {{"rho", rho}, {"tol", tol}, {"max_iter", max_iter},
            {"over_relaxation", over_relaxation}, {"adapt_rho", !no_adapt_rho}};
  }
};

struct FitFlags {
  std::string input;
  std::string y_column;
  std::string output = "cdfpen_fit";
  std::string penalty;
  std::optional<double> lambda;
  std::optional<double> nu;
  std::optional<std::string> nu_rule;
  std::optional<double> gamma;
  int n_lambda = 100;
  double lambda_min_ratio = 0.001;
  bool plot = false;
  SolverFlags solver;
};

struct SimulateFlags {
  std::string scenario_file;
  std::optional<int> replicates;
  std::optional<std::uint64_t> seed;
  bool fixed_support = false;
  std::optional<std::string> methods;
  std::optional<double> gamma_scad;
  std::optional<double> gamma_mcp;
  std::optional<int> n_lambda;
  std::optional<double> lambda_min_ratio;
  int threads = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  std::string output = "cdfpen_sim";
  bool plot = false;
  SolverFlags solver;
};

struct TableFlags {
  std::string penalties = "cdf,lasso,scad,mcp";
  double lambda = 1.0;
  std::vector<double> nus{0.5, 1.0, 10.0};
  double gamma_scad = kDefaultGammaScad;
  double gamma_mcp = kDefaultGammaMcp;
  double beta_min = 0.0;
  double beta_max = 4.0;
  int points = 401;
  std::string output = "-";
  std::optional<std::string> plot;
};

struct ProxCheckFlags {
  std::string penalty = "cdf";
  double lambda = 1.0;
  std::optional<double> nu;
  std::optional<double> gamma;
  double tau = 1.0;
  double v_min = -5.0;
  double v_max = 5.0;
  int points = 201;
  int grid = 200001;
  std::string output = "-";
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ColumnRef column_ref(const std::string& text) {
  if (!text.empty() && std::all_of(text.begin(), text.end(),
                                   [](unsigned char c) { return std::isdigit(c); })) {
    return static_cast<std::size_t>(std::stoull(text));
  }
  return text;
}

void write_header(std::ostream& out, const std::string& command, const json& config) {
  write_meta(out, "cdfpen", kVersion);
  write_meta(out, "command", command);
  write_meta(out, "config", config.dump());
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  return f;
}

// Sends output to `out` for "-", to a file otherwise.
template <typename Fn>
void with_output(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path == "-") {
    fn(out);
    return;
  }
  auto f = open_output(path);
  fn(f);
}

// Resolves the CDF nu rule from --nu / --nu-rule.
NuRule resolve_nu_rule(const FitFlags& f, std::ostream& err) {
  if (f.nu_rule) {
    const std::string rule = *f.nu_rule;
    if (rule == "fixed") {
      if (!f.nu) throw ValidationError("--nu-rule fixed requires --nu");
      return NuFixed{*f.nu};
    }
    if (f.nu) throw ValidationError("--nu conflicts with --nu-rule " + rule);
    return parse_nu_rule(rule);
  }
  if (f.nu) return NuFixed{*f.nu};
  err << "note: --penalty cdf without --nu or --nu-rule; using --nu-rule nu-min\n";
  return NuMin{};
}

int cmd_fit(const FitFlags& f, std::ostream& err) {
  const PenaltyKind kind = parse_penalty_kind(f.penalty);
  if (kind != PenaltyKind::Cdf && f.nu) throw ValidationError("nu is only valid for cdf");
  if (kind != PenaltyKind::Cdf && f.nu_rule) throw ValidationError("nu-rule is only valid for cdf");
  if (f.gamma && kind != PenaltyKind::Scad && kind != PenaltyKind::Mcp) {
    throw ValidationError("gamma is only valid for scad and mcp");
  }
  if (f.lambda && !(*f.lambda >= 0.0)) throw ValidationError("--lambda must be >= 0");

  PathSpec spec;
  spec.kind = kind;
  spec.gamma = f.gamma;
  spec.n_lambda = f.n_lambda;
  spec.lambda_min_ratio = f.lambda_min_ratio;
  if (kind == PenaltyKind::Cdf) spec.nu_rule = resolve_nu_rule(f, err);
  spec.validate();
  const AdmmConfig acfg = f.solver.config();

  const Dataset data = load_dataset(f.input, column_ref(f.y_column));
  const StandardizedDesign design = standardize(data);

  PathResult path;
  if (f.lambda) {
    path.kind = kind;
    path.convexity_floor = convexity_floor(design, acfg.rho);
    path.nu_rule = kind == PenaltyKind::Cdf ? nu_rule_name(spec.nu_rule) : "";
    const PenaltyConfig cfg = penalty_at(spec, *f.lambda, path.convexity_floor);
    path.gamma = cfg.gamma();
    path.lambdas = Eigen::VectorXd::Constant(1, *f.lambda);
    path.fits.push_back(fit(design, cfg, acfg));
    path.nonzero_counts.push_back(path.fits.back().nonzeros());
  } else {
    path = fit_path(design, spec, acfg);
  }

  json config = {{"input", f.input},
                 {"y", f.y_column},
                 {"penalty", std::string(to_string(kind))},
                 {"n", data.n()},
                 {"p", data.p()},
                 {"convexity_floor", path.convexity_floor},
                 {"solver", f.solver.to_json()}};
  if (kind == PenaltyKind::Cdf) config["nu_rule"] = nu_rule_name(spec.nu_rule);
  if (path.gamma) config["gamma"] = *path.gamma;
  if (f.lambda) {
    config["lambda"] = *f.lambda;
  } else {
    config["n_lambda"] = spec.n_lambda;
    config["lambda_min_ratio"] = spec.lambda_min_ratio;
  }

  {
    auto out = open_output(f.output + "_coefficients.csv");
    write_header(out, "fit", config);
    write_path_coefficients(out, path, &data);
  }
  {
    auto out = open_output(f.output + "_summary.csv");
    write_header(out, "fit", config);
    write_path_summary(out, path);
  }
  int not_converged = 0;
  for (const auto& fr : path.fits) not_converged += fr.converged ? 0 : 1;
  if (not_converged > 0) {
    err << "warning: " << not_converged << " of " << path.fits.size()
        << " fits hit --max-iter before converging\n";
  }
  if (f.plot && path.fits.size() > 1) {
    LinePlot plot{"Coefficient paths (" + std::string(to_string(kind)) + ")",
                  "lambda / lambda_max", "standardized coefficient", {}};
    const double lmax = path.lambdas[0];
    for (Eigen::Index j = 0; j < design.p(); ++j) {
      bool ever = false;
      for (const auto& fr : path.fits) ever = ever || fr.beta_std[j] != 0.0;
      if (!ever) continue;
      PlotSeries s{data.column_label(j), {}, {}};
      for (std::size_t k = 0; k < path.fits.size(); ++k) {
        s.x.push_back(path.lambdas[static_cast<Eigen::Index>(k)] / lmax);
        s.y.push_back(path.fits[k].beta_std[j]);
      }
      plot.series.push_back(std::move(s));
    }
    auto out = open_output(f.output + "_path.svg");
    out << render_svg(plot);
  }
  err << "wrote " << f.output << "_coefficients.csv and " << f.output << "_summary.csv\n";
  return kExitOk;
}

int cmd_simulate(const SimulateFlags& f, std::ostream& err) {
  std::ifstream in(f.scenario_file);
  if (!in) throw ValidationError("cannot open scenario file '" + f.scenario_file + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("scenario file is not valid JSON: " + std::string(e.what()));
  }
  ScenarioFile file = parse_scenario_file(doc);
  if (f.gamma_scad || f.gamma_mcp || f.methods) {
    const double gs = f.gamma_scad.value_or(file.gamma_scad);
    const double gm = f.gamma_mcp.value_or(file.gamma_mcp);
    std::vector<std::string> labels;
    if (f.methods) {
      labels = split_list(*f.methods);
    } else {
      for (const auto& m : file.methods) labels.push_back(m.label);
    }
    if (labels.empty()) throw ValidationError("--methods must name at least one method");
    file.methods.clear();
    for (const auto& l : labels) file.methods.push_back(parse_method(l, gs, gm));
    file.gamma_scad = gs;
    file.gamma_mcp = gm;
  }
  if (f.n_lambda) file.grid.n_lambda = *f.n_lambda;
  if (f.lambda_min_ratio) file.grid.lambda_min_ratio = *f.lambda_min_ratio;
  file.grid.validate();
  for (auto& sc : file.scenarios) {
    if (f.replicates) sc.n_replicates = *f.replicates;
    if (f.seed) sc.seed = *f.seed;
    if (f.fixed_support) sc.fixed_support = true;
    sc.validate();
  }
  if (f.threads < 1) throw ValidationError("--threads must be >= 1");
  const AdmmConfig acfg = f.solver.config();

  std::vector<ScenarioReport> reports;
  for (const auto& sc : file.scenarios) {
    err << "running " << sc.name << " sigma=" << sc.sigma << " (" << sc.n_replicates
        << " replicates, " << file.methods.size() << " methods)\n";
    reports.push_back(run_scenario(sc, file.methods, file.grid, acfg, f.threads));
  }

  const Scenario& first = file.scenarios.front();
  json config = {{"scenario_file", f.scenario_file},
                 {"name", first.name},
                 {"n", first.n},
                 {"p", first.p},
                 {"rho_toeplitz", first.rho_toeplitz},
                 {"n_signal", first.n_signal},
                 {"signal_low", first.signal_low},
                 {"signal_high", first.signal_high},
                 {"n_replicates", first.n_replicates},
                 {"seed", first.seed},
                 {"fixed_support", first.fixed_support},
                 {"gamma_scad", file.gamma_scad},
                 {"gamma_mcp", file.gamma_mcp},
                 {"n_lambda", file.grid.n_lambda},
                 {"lambda_min_ratio", file.grid.lambda_min_ratio},
                 {"solver", f.solver.to_json()}};
  config["sigma"] = json::array();
  for (const auto& sc : file.scenarios) config["sigma"].push_back(sc.sigma);
  config["methods"] = json::array();
  for (const auto& m : file.methods) config["methods"].push_back(m.label);

  {
    auto out = open_output(f.output + "_metrics.csv");
    write_header(out, "simulate", config);
    write_metrics_csv(out, reports);
  }
  {
    auto out = open_output(f.output + "_auc.csv");
    write_header(out, "simulate", config);
    write_auc_csv(out, reports);
  }
  {
    json summary = summary_json(reports);
    summary["config"] = config;
    summary["threads"] = f.threads;
    auto out = open_output(f.output + "_summary.json");
    out << summary.dump(2) << '\n';
  }
  if (f.plot) {
    LinePlot auc{"Mean AUC by noise level", "sigma", "mean AUC", {}};
    for (std::size_t m = 0; m < file.methods.size(); ++m) {
      PlotSeries s{file.methods[m].label, {}, {}};
      for (const auto& rep : reports) {
        s.x.push_back(rep.scenario.sigma);
        s.y.push_back(rep.methods[m].mean_auc);
      }
      auc.series.push_back(std::move(s));
    }
    open_output(f.output + "_auc.svg") << render_svg(auc);
    for (std::size_t r = 0; r < reports.size(); ++r) {
      const auto& rep = reports[r];
      LinePlot mse{"Mean MSE along the path (sigma=" + format_number(rep.scenario.sigma) + ")",
                   "lambda / lambda_max", "mean MSE", {}};
      for (const auto& mr : rep.methods) {
        PlotSeries s{mr.method.label, {}, mr.mean_mse};
        s.x.assign(rep.rescaled_lambda.begin(), rep.rescaled_lambda.end());
        mse.series.push_back(std::move(s));
      }
      open_output(f.output + "_mse_" + std::to_string(r) + ".svg") << render_svg(mse);
    }
  }
  int failures = 0;
  for (const auto& rep : reports) {
    for (const auto& mr : rep.methods) failures += mr.failures;
  }
  if (failures > 0) err << "warning: " << failures << " replicate fits failed (see _auc.csv)\n";
  err << "wrote " << f.output << "_metrics.csv, " << f.output << "_auc.csv and " << f.output
      << "_summary.json\n";
  return kExitOk;
}

int cmd_penalty_table(const TableFlags& f, std::ostream& out) {
  if (f.points < 2) throw ValidationError("--points must be >= 2");
  if (!(f.beta_max > f.beta_min)) throw ValidationError("--beta-max must exceed --beta-min");
  std::vector<PenaltyConfig> cfgs;
  for (const auto& name : split_list(f.penalties)) {
    switch (parse_penalty_kind(name)) {
      case PenaltyKind::Cdf:
        if (f.nus.empty()) throw ValidationError("--nu needs at least one value");
        for (double nu : f.nus) cfgs.push_back(PenaltyConfig::cdf(f.lambda, nu));
        break;
      case PenaltyKind::Lasso: cfgs.push_back(PenaltyConfig::lasso(f.lambda)); break;
      case PenaltyKind::Scad: cfgs.push_back(PenaltyConfig::scad(f.lambda, f.gamma_scad)); break;
      case PenaltyKind::Mcp: cfgs.push_back(PenaltyConfig::mcp(f.lambda, f.gamma_mcp)); break;
    }
  }
  if (cfgs.empty()) throw ValidationError("--penalty must name at least one penalty");

  std::vector<double> grid(static_cast<std::size_t>(f.points));
  for (int k = 0; k < f.points; ++k) {
    grid[static_cast<std::size_t>(k)] = f.beta_min + (f.beta_max - f.beta_min) * k / (f.points - 1);
  }
  grid.back() = f.beta_max;

  auto derivative = [](const PenaltyConfig& cfg, double beta) {
    if (beta == 0.0) return d_zero_plus(cfg);
    const double d = penalty_derivative(cfg, std::abs(beta));
    return beta < 0.0 ? -d : d;
  };

  const json config = {{"penalty", f.penalties}, {"lambda", f.lambda},     {"nu", f.nus},
                       {"gamma_scad", f.gamma_scad}, {"gamma_mcp", f.gamma_mcp},
                       {"beta_min", f.beta_min}, {"beta_max", f.beta_max}, {"points", f.points}};
  with_output(f.output, out, [&](std::ostream& os) {
    write_header(os, "penalty-table", config);
    os << "penalty,nu,gamma,lambda,beta,value,derivative\n";
    for (const auto& cfg : cfgs) {
      for (double b : grid) {
        os << to_string(cfg.kind()) << ',' << (cfg.nu() ? format_number(*cfg.nu()) : "") << ','
           << (cfg.gamma() ? format_number(*cfg.gamma()) : "") << ','
           << format_number(cfg.lambda()) << ',' << format_number(b) << ','
           << format_number(penalty_value(cfg, b)) << ',' << format_number(derivative(cfg, b))
           << '\n';
      }
    }
  });

  if (f.plot) {
    LinePlot shape{"Penalty shape", "beta", "p(|beta|)", {}};
    LinePlot slope{"Penalty derivative", "beta", "p'(|beta|)", {}};
    for (const auto& cfg : cfgs) {
      PlotSeries s{cfg.describe(), grid, {}};
      PlotSeries d{cfg.describe(), grid, {}};
      for (double b : grid) {
        s.y.push_back(penalty_value(cfg, b));
        d.y.push_back(derivative(cfg, b));
      }
      shape.series.push_back(std::move(s));
      slope.series.push_back(std::move(d));
    }
    open_output(*f.plot + "_value.svg") << render_svg(shape);
    open_output(*f.plot + "_derivative.svg") << render_svg(slope);
  }
  return kExitOk;
}

int cmd_prox_check(const ProxCheckFlags& f, std::ostream& out, std::ostream& err) {
  const PenaltyKind kind = parse_penalty_kind(f.penalty);
  if (kind != PenaltyKind::Cdf && f.nu) throw ValidationError("nu is only valid for cdf");
  if (f.gamma && kind != PenaltyKind::Scad && kind != PenaltyKind::Mcp) {
    throw ValidationError("gamma is only valid for scad and mcp");
  }
  if (f.points < 2 || f.grid < 3) throw ValidationError("--points >= 2 and --grid >= 3 required");
  if (!(f.v_max > f.v_min)) throw ValidationError("--v-max must exceed --v-min");
  PenaltyConfig cfg = PenaltyConfig::lasso(f.lambda);
  switch (kind) {
    case PenaltyKind::Cdf: cfg = PenaltyConfig::cdf(f.lambda, f.nu.value_or(1.0)); break;
    case PenaltyKind::Lasso: break;
    case PenaltyKind::Scad: cfg = PenaltyConfig::scad(f.lambda, f.gamma.value_or(kDefaultGammaScad)); break;
    case PenaltyKind::Mcp: cfg = PenaltyConfig::mcp(f.lambda, f.gamma.value_or(kDefaultGammaMcp)); break;
  }
  if (!(f.tau > 0.0)) throw ValidationError("--tau must be > 0");

  const json config = {{"penalty", cfg.describe()}, {"tau", f.tau},       {"v_min", f.v_min},
                       {"v_max", f.v_max},          {"points", f.points}, {"grid", f.grid}};
  double worst = 0.0;
  with_output(f.output, out, [&](std::ostream& os) {
    write_header(os, "prox-check", config);
    os << "v,prox,objective,grid_min_objective,gap,convex\n";
    const bool convex = prox_is_convex(f.tau, cfg);
    for (int k = 0; k < f.points; ++k) {
      const double v = f.v_min + (f.v_max - f.v_min) * k / (f.points - 1);
      const ProxRequest req{v, f.tau, cfg};
      const double z = prox_scalar(req);
      const double obj = prox_objective(req, z);
      const double half = 2.0 * std::abs(v) + 1.0;
      double grid_min = std::numeric_limits<double>::infinity();
      for (int g = 0; g < f.grid; ++g) {
        const double zz = -half + 2.0 * half * g / (f.grid - 1);
        grid_min = std::min(grid_min, prox_objective(req, zz));
      }
      const double gap = obj - grid_min;
      worst = std::max(worst, gap);
      os << format_number(v) << ',' << format_number(z) << ',' << format_number(obj) << ','
         << format_number(grid_min) << ',' << format_number(gap) << ',' << (convex ? 1 : 0)
         << '\n';
    }
  });
  err << "max objective gap vs grid oracle: " << format_number(worst) << '\n';
  return worst <= 1e-9 ? kExitOk : kExitRuntime;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse regression with the CDF penalty, LASSO, SCAD and MCP"};
  app.name("cdfpen");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  FitFlags fit_flags;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a regularization path on a CSV dataset");
  fit_cmd->add_option("--input", fit_flags.input, "CSV file with a header row")->required();
  fit_cmd->add_option("--y", fit_flags.y_column, "Response column (name or zero-based index)")
      ->required();
  fit_cmd->add_option("--output", fit_flags.output, "Output prefix")->capture_default_str();
  fit_cmd->add_option("--penalty", fit_flags.penalty, "cdf, lasso, scad or mcp")->required();
  fit_cmd->add_option("--lambda", fit_flags.lambda, "Fit a single lambda instead of a path");
  fit_cmd->add_option("--nu", fit_flags.nu, "Fixed CDF shape parameter");
  fit_cmd->add_option("--nu-rule", fit_flags.nu_rule, "nu-min, nu-bar or fixed");
  fit_cmd->add_option("--gamma", fit_flags.gamma, "SCAD / MCP shape parameter");
  fit_cmd->add_option("--n-lambda", fit_flags.n_lambda, "Grid size")->capture_default_str();
  fit_cmd->add_option("--lambda-min-ratio", fit_flags.lambda_min_ratio,
                      "Smallest lambda as a fraction of lambda_max")
      ->capture_default_str();
  fit_cmd->add_flag("--plot", fit_flags.plot, "Write an SVG of the coefficient paths");
  fit_flags.solver.add_to(*fit_cmd);

  SimulateFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run replicated simulation scenarios");
  sim_cmd->add_option("--scenario-file", sim.scenario_file, "Scenario JSON")->required();
  sim_cmd->add_option("--replicates", sim.replicates, "Override n_replicates");
  sim_cmd->add_option("--seed", sim.seed, "Override the base seed");
  sim_cmd->add_flag("--fixed-support", sim.fixed_support,
                    "Draw signal locations once per seed instead of per replicate");
  sim_cmd->add_option("--methods", sim.methods,
                      "Comma list: lasso,scad,mcp,cdf-numin,cdf-nubar,cdf-nu<value>");
  sim_cmd->add_option("--gamma-scad", sim.gamma_scad, "SCAD gamma");
  sim_cmd->add_option("--gamma-mcp", sim.gamma_mcp, "MCP gamma");
  sim_cmd->add_option("--n-lambda", sim.n_lambda, "Override grid size");
  sim_cmd->add_option("--lambda-min-ratio", sim.lambda_min_ratio, "Override grid ratio");
  sim_cmd->add_option("--threads", sim.threads, "Worker threads")->capture_default_str();
  sim_cmd->add_option("--output", sim.output, "Output prefix")->capture_default_str();
  sim_cmd->add_flag("--plot", sim.plot, "Write SVG plots of AUC and MSE");
  sim.solver.add_to(*sim_cmd);

  TableFlags table;
  auto* table_cmd = app.add_subcommand("penalty-table", "Tabulate penalty values and derivatives");
  table_cmd->add_option("--penalty", table.penalties, "Comma list of penalties")
      ->capture_default_str();
  table_cmd->add_option("--lambda", table.lambda, "Lambda")->capture_default_str();
  table_cmd->add_option("--nu", table.nus, "CDF nu values")->delimiter(',');
  table_cmd->add_option("--gamma-scad", table.gamma_scad, "SCAD gamma")->capture_default_str();
  table_cmd->add_option("--gamma-mcp", table.gamma_mcp, "MCP gamma")->capture_default_str();
  table_cmd->add_option("--beta-min", table.beta_min, "Grid start")->capture_default_str();
  table_cmd->add_option("--beta-max", table.beta_max, "Grid end")->capture_default_str();
  table_cmd->add_option("--points", table.points, "Grid size")->capture_default_str();
  table_cmd->add_option("--output", table.output, "CSV path or - for stdout")
      ->capture_default_str();
  table_cmd->add_option("--plot", table.plot, "SVG output prefix");

  ProxCheckFlags pc;
  auto* prox_cmd = app.add_subcommand("prox-check", "Compare the prox against a grid oracle");
  prox_cmd->add_option("--penalty", pc.penalty, "cdf, lasso, scad or mcp")->capture_default_str();
  prox_cmd->add_option("--lambda", pc.lambda, "Lambda")->capture_default_str();
  prox_cmd->add_option("--nu", pc.nu, "CDF nu (default 1)");
  prox_cmd->add_option("--gamma", pc.gamma, "SCAD / MCP gamma");
  prox_cmd->add_option("--tau", pc.tau, "Prox step")->capture_default_str();
  prox_cmd->add_option("--v-min", pc.v_min, "Smallest input")->capture_default_str();
  prox_cmd->add_option("--v-max", pc.v_max, "Largest input")->capture_default_str();
  prox_cmd->add_option("--points", pc.points, "Number of inputs")->capture_default_str();
  prox_cmd->add_option("--grid", pc.grid, "Oracle grid size")->capture_default_str();
  prox_cmd->add_option("--output", pc.output, "CSV path or - for stdout")->capture_default_str();

  std::vector<const char*> argv{"cdfpen"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit_flags, err);
    if (*sim_cmd) return cmd_simulate(sim, err);
    if (*table_cmd) return cmd_penalty_table(table, out);
    if (*prox_cmd) return cmd_prox_check(pc, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace cdfpen::cli
