#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>

#include "cdfpen/core_model.hpp"
#include "cdfpen/penalties.hpp"

namespace cdfpen {

/// ADMM tuning. Defaults are tight enough for 1e-6 level comparisons.
struct AdmmConfig {
  double rho = 1.0;
  double tol_primal = 1e-7;
  double tol_dual = 1e-7;
  int max_iter = 10000;
  double over_relaxation = 1.5;  // alpha in [1, 1.8]
  bool adapt_rho = true;
  int adapt_every = 10;          // iterations between residual-balancing checks
  int relaxation_patience = 1000;  // iterations before over-relaxation falls back to 1

  // Throws ValidationError when a field is out of range.
  void validate() const;
};

/**
 * Solves (X'X / n + rho I) x = b for a fixed standardized design.
 *
 * Factors the p x p system when p <= n. Otherwise factors the n x n matrix
 * n rho I + X X' and applies the Woodbury identity. Holds a pointer to the
 * design matrix, which must outlive the factorization.
 */
class RidgeFactorization {
 public:
  RidgeFactorization(const Eigen::MatrixXd& xs, double rho);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  double rho() const { return rho_; }
  bool uses_woodbury() const { return woodbury_; }

 private:
  const Eigen::MatrixXd* xs_;
  double rho_;
  bool woodbury_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// Iterates carried between fits (warm starts) or supplied as a custom start.
struct AdmmState {
  Eigen::VectorXd beta;
  Eigen::VectorXd z;
  Eigen::VectorXd u;  // scaled dual
  double rho = 1.0;
  int iterations = 0;
  std::shared_ptr<const RidgeFactorization> factor;  // may be null or stale
};

/// Lower bound on rho that keeps the CDF z-update convex: lambda * exp(-1/2) / nu.
/// Zero for the other kinds.
double rho_floor(const PenaltyConfig& cfg);

/**
 * Residual balancing. Doubles rho when primal > 10 * dual, halves it when
 * dual > 10 * primal (never below rho_floor), and rescales u so that
 * rho * u is unchanged. Refreshes the factorization if rho moved.
 * Returns true when rho changed.
 */
bool adapt_rho(AdmmState& state, double primal, double dual, const PenaltyConfig& cfg,
               const StandardizedDesign& design);

/// (1 / 2n) ||y - X b||^2 + sum_j p(|b_j|) on the standardized scale.
double penalized_objective(const StandardizedDesign& design, const PenaltyConfig& cfg,
                           const Eigen::VectorXd& beta_std);

/// Cold start: z = 0 and u = X'y / (n rho), the dual certificate of the null model.
AdmmState cold_start(const StandardizedDesign& design, double rho);

/**
 * Penalized least squares by ADMM on the split beta = z. `state` is both the
 * starting point and, on return, the final iterate (ready for a warm start).
 * Reports z, which carries exact zeros, as the solution.
 */
FitResult fit(const StandardizedDesign& design, const PenaltyConfig& cfg,
              const AdmmConfig& acfg, AdmmState& state);

/// Convenience overload; cold-starts when `warm` is empty.
FitResult fit(const StandardizedDesign& design, const PenaltyConfig& cfg,
              const AdmmConfig& acfg, const std::optional<AdmmState>& warm = std::nullopt);

}  // namespace cdfpen
