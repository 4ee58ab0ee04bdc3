#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cdfpen/error.hpp"

namespace cdfpen {

enum class PenaltyKind { Cdf, Lasso, Scad, Mcp };

inline constexpr double kDefaultGammaScad = 3.7;
inline constexpr double kDefaultGammaMcp = 3.0;

// Smallest nu handed out by nu_min; keeps CDF configs valid at lambda = 0.
inline constexpr double kNuFloor = 1e-8;

std::string_view to_string(PenaltyKind kind);

/// Accepts "cdf", "lasso", "scad", "mcp" (case-insensitive).
PenaltyKind parse_penalty_kind(std::string_view name);

/**
 * Penalty family member with its tuning parameters.
 *
 * nu is set only for CDF, gamma only for SCAD and MCP. Ranges are checked
 * by the factory functions, which throw ValidationError.
 */
class PenaltyConfig {
 public:
  static PenaltyConfig cdf(double lambda, double nu);
  static PenaltyConfig lasso(double lambda);
  static PenaltyConfig scad(double lambda, double gamma = kDefaultGammaScad);
  static PenaltyConfig mcp(double lambda, double gamma = kDefaultGammaMcp);

  // Same kind and shape, different lambda.
  PenaltyConfig with_lambda(double lambda) const;

  PenaltyKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  std::optional<double> nu() const { return nu_; }
  std::optional<double> gamma() const { return gamma_; }

  std::string describe() const;

 private:
  PenaltyConfig(PenaltyKind kind, double lambda, std::optional<double> nu,
                std::optional<double> gamma);

  PenaltyKind kind_;
  double lambda_;
  std::optional<double> nu_;
  std::optional<double> gamma_;
};

double normal_cdf(double x);
double normal_pdf(double x);

/// p_lambda(|beta|). The CDF value is not centered: at 0 it equals
/// lambda * sqrt(2 pi) * nu / 2.
double penalty_value(const PenaltyConfig& cfg, double beta);

/// p'_lambda(beta) for beta > 0; throws ValidationError otherwise.
double penalty_derivative(const PenaltyConfig& cfg, double beta);

/// Right derivative at the origin. Equals lambda for every kind.
double d_zero_plus(const PenaltyConfig& cfg);

/// Second derivative of the CDF penalty for beta > 0.
double cdf_second_derivative(const PenaltyConfig& cfg, double beta);

/**
 * Smallest nu such that convexity_floor + min_beta p''(beta) >= 0 for the
 * CDF penalty at this lambda, i.e. lambda * exp(-1/2) / convexity_floor.
 * Clamped below at kNuFloor.
 */
double nu_min(double lambda, double convexity_floor);

namespace detail {
// Derivative on |beta| for beta >= 0, with the right limit at 0.
double derivative_abs(const PenaltyConfig& cfg, double abs_beta);
}  // namespace detail

}  // namespace cdfpen
