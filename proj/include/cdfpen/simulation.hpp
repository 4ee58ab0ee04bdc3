#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdfpen/admm.hpp"
#include "cdfpen/core_model.hpp"
#include "cdfpen/metrics.hpp"
#include "cdfpen/path.hpp"

namespace cdfpen {

/// One simulation setting: Toeplitz-correlated Gaussian design with a sparse signal.
struct Scenario {
  std::string name = "scenario";
  int n = 50;
  int p = 100;
  double rho_toeplitz = 0.5;
  int n_signal = 10;
  double signal_low = 2.0;
  double signal_high = 2.5;
  double sigma = 0.25;
  int n_replicates = 500;
  std::uint64_t seed = 1;
  bool fixed_support = false;  // draw support locations once per seed, not per replicate

  void validate() const;
};

/// A penalty to compare, e.g. "cdf-numin", "mcp".
struct Method {
  std::string label;
  PenaltyKind kind = PenaltyKind::Lasso;
  NuRule nu_rule = NuMin{};
  std::optional<double> gamma;

  PathSpec path_spec(const PathSpec& grid) const;
};

/**
 * Accepts lasso, scad, mcp, cdf-numin, cdf-nubar, cdf-nu<value> (e.g. cdf-nu3)
 * and cdf-fixed:<value>. SCAD and MCP take the supplied gammas.
 */
Method parse_method(const std::string& label, double gamma_scad = kDefaultGammaScad,
                    double gamma_mcp = kDefaultGammaMcp);

/// SCAD, MCP, CDF at nu = 3, nu_bar, nu_min, then LASSO as the reference.
std::vector<Method> default_methods(double gamma_scad = kDefaultGammaScad,
                                    double gamma_mcp = kDefaultGammaMcp);

/// Sigma_jk = rho^|j-k|.
Eigen::MatrixXd toeplitz_sigma(int p, double rho);

/// Child seed for one replicate; independent of every other replicate.
std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t replicate_index);

struct Replicate {
  Dataset data;
  TruthSpec truth;
};

/// Deterministic in (scenario.seed, replicate_index). The intercept of the
/// generating model is 0.
Replicate gen_replicate(const Scenario& sc, int replicate_index);

struct ReplicateMetrics {
  int replicate = 0;
  bool failed = false;
  std::string error;
  double lambda_max = 0.0;
  std::vector<double> mse, fpr, tpr;  // one entry per grid point
  std::vector<Eigen::Index> nonzeros;
  double auc = 0.0;
  int nonconverged_fits = 0;
};

struct MethodReport {
  Method method;
  std::vector<ReplicateMetrics> replicates;  // ordered by replicate index
  std::vector<double> mean_mse, mean_fpr, mean_tpr;  // over successful replicates
  double mean_auc = 0.0;
  int failures = 0;
  int nonconverged_fits = 0;
};

struct ScenarioReport {
  Scenario scenario;
  PathSpec grid;
  Eigen::VectorXd rescaled_lambda;  // lambda / lambda_max at each grid index
  std::vector<MethodReport> methods;
  double wall_seconds = 0.0;
};

/**
 * Fits every method's full path on every replicate and aggregates the
 * per-grid-point MSE / FPR / TPR and per-replicate AUC. Replicates run on
 * `threads` workers; results do not depend on the thread count.
 */
ScenarioReport run_scenario(const Scenario& sc, const std::vector<Method>& methods,
                            const PathSpec& grid, const AdmmConfig& acfg, int threads = 1);

/// Parsed scenario file: one Scenario per sigma value plus shared settings.
struct ScenarioFile {
  std::vector<Scenario> scenarios;
  std::vector<Method> methods;
  PathSpec grid;
  double gamma_scad = kDefaultGammaScad;
  double gamma_mcp = kDefaultGammaMcp;
};

/// Field-level ValidationError on malformed input. "sigma" may be a number or a list.
ScenarioFile parse_scenario_file(const nlohmann::json& doc);

/// Long format, one row per (method, sigma, replicate, lambda index).
void write_metrics_csv(std::ostream& out, const std::vector<ScenarioReport>& reports);

/// One row per (method, sigma, replicate) with the path AUC.
void write_auc_csv(std::ostream& out, const std::vector<ScenarioReport>& reports);

/// Aggregated means, failure counts and timings.
nlohmann::json summary_json(const std::vector<ScenarioReport>& reports);

}  // namespace cdfpen
