#pragma once

#include <Eigen/Dense>

#include <optional>
#include <ostream>
#include <string>
#include <variant>

#include "cdfpen/admm.hpp"
#include "cdfpen/core_model.hpp"
#include "cdfpen/penalties.hpp"

namespace cdfpen {

// Rules for choosing the CDF shape parameter at each lambda.
struct NuFixed {
  double nu;
};
struct NuMin {};
struct NuBar {};  // midpoint between nu_min and 3
using NuRule = std::variant<NuFixed, NuMin, NuBar>;

inline constexpr double kNuLassoLike = 3.0;

std::string nu_rule_name(const NuRule& rule);

/// Parses "nu-min", "nu-bar", "fixed:<value>" (underscores accepted too).
NuRule parse_nu_rule(const std::string& text);

/// Grid policy plus the penalty being traced.
struct PathSpec {
  int n_lambda = 100;
  double lambda_min_ratio = 0.001;
  PenaltyKind kind = PenaltyKind::Cdf;
  NuRule nu_rule = NuMin{};
  std::optional<double> gamma;  // SCAD / MCP; defaults applied when empty

  void validate() const;
};

/// max_j |x_j' y| / n: the smallest lambda at which beta = 0 is stationary.
double lambda_max(const StandardizedDesign& design, PenaltyKind kind = PenaltyKind::Lasso);

/// n_lambda log-spaced values from lmax down to lmax * lambda_min_ratio.
Eigen::VectorXd lambda_grid(double lmax, const PathSpec& spec);

double nu_for_lambda(double lambda, const NuRule& rule, double convexity_floor);

/**
 * Smallest eigenvalue of X'X / n when it is at least 1e-8, otherwise the
 * ADMM rho (the curvature opposing the penalty in the z-update).
 */
double convexity_floor(const StandardizedDesign& design, double rho);

/// Builds the penalty for one grid point (nu rebuilt per lambda for CDF).
PenaltyConfig penalty_at(const PathSpec& spec, double lambda, double floor);

/// Fits the whole path, warm-starting each lambda from the previous solution.
PathResult fit_path(const StandardizedDesign& design, const PathSpec& spec,
                    const AdmmConfig& acfg);

/// Long-format nonzero coefficients: lambda_index,lambda,coef_index,name,beta_std,beta.
void write_path_coefficients(std::ostream& out, const PathResult& path, const Dataset* data);

/// One row per lambda: lambda_index,lambda,nu,gamma,nonzeros,objective,iterations,converged,intercept.
void write_path_summary(std::ostream& out, const PathResult& path);

}  // namespace cdfpen
