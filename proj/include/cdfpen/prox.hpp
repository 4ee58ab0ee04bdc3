#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cdfpen/penalties.hpp"

namespace cdfpen {

/// Input to the scalar proximal map. tau is the prox step; inside ADMM it is 1 / rho.
struct ProxRequest {
  double v = 0.0;
  double tau = 1.0;
  PenaltyConfig cfg = PenaltyConfig::lasso(0.0);
};

/// sign(v) * max(|v| - t, 0).
double soft_threshold(double v, double t);

/// The scalar prox objective (z - v)^2 / (2 tau) + p(|z|).
double prox_objective(const ProxRequest& req, double z);

/**
 * Global minimizer of (z - v)^2 / (2 tau) + p_lambda(|z|).
 *
 * LASSO, SCAD and MCP use closed forms in their convex regimes and an exact
 * piecewise-quadratic search otherwise. CDF enumerates every stationary
 * point (at most three on each half-line) and keeps the best candidate.
 * Ties go to 0, then to the smaller |z|.
 */
double prox_scalar(const ProxRequest& req);

/// Componentwise prox_scalar with a shared step and penalty.
Eigen::VectorXd prox_vector(const Eigen::VectorXd& v, double tau, const PenaltyConfig& cfg);

/// True when the scalar prox objective is convex for this step, so the
/// minimizer is unique and monotone in v.
bool prox_is_convex(double tau, const PenaltyConfig& cfg);

/**
 * Positive stationary points of the CDF prox objective for the input v,
 * in increasing order. Empty when none exist. Exposed for diagnostics.
 */
std::vector<double> cdf_stationary_points(double v, double tau, const PenaltyConfig& cfg);

/**
 * Safeguarded Newton solve of the CDF stationarity equation
 * z + tau * lambda * exp(-z^2 / (2 nu^2)) = |v| started at `start`, kept
 * inside the bracket [0, |v|]. Requires |v| > tau * lambda. Returns the root
 * carrying the sign of v.
 */
double cdf_newton_from(double v, double tau, const PenaltyConfig& cfg, double start);

}  // namespace cdfpen
