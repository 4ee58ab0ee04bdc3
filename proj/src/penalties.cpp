#include "cdfpen/penalties.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cdfpen/error.hpp"

namespace cdfpen {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;  // sqrt(2 pi)

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw ValidationError(std::string(what) + " must be finite");
  }
}

}  // namespace

std::string_view to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::Cdf: return "cdf";
    case PenaltyKind::Lasso: return "lasso";
    case PenaltyKind::Scad: return "scad";
    case PenaltyKind::Mcp: return "mcp";
  }
  return "unknown";
}

PenaltyKind parse_penalty_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "cdf") return PenaltyKind::Cdf;
  if (lower == "lasso") return PenaltyKind::Lasso;
  if (lower == "scad") return PenaltyKind::Scad;
  if (lower == "mcp") return PenaltyKind::Mcp;
  throw ValidationError("unknown penalty '" + std::string(name) +
                        "' (expected cdf, lasso, scad or mcp)");
}

PenaltyConfig::PenaltyConfig(PenaltyKind kind, double lambda, std::optional<double> nu,
                             std::optional<double> gamma)
    : kind_(kind), lambda_(lambda), nu_(nu), gamma_(gamma) {
  require_finite(lambda, "lambda");
  if (lambda < 0.0) throw ValidationError("lambda must be >= 0");
  if (nu) {
    require_finite(*nu, "nu");
    if (*nu <= 0.0) throw ValidationError("nu must be > 0");
  }
  if (gamma) {
    require_finite(*gamma, "gamma");
    if (kind == PenaltyKind::Scad && *gamma <= 2.0) {
      throw ValidationError("SCAD gamma must be > 2");
    }
    if (kind == PenaltyKind::Mcp && *gamma <= 1.0) {
      throw ValidationError("MCP gamma must be > 1");
    }
  }
}

PenaltyConfig PenaltyConfig::cdf(double lambda, double nu) {
  return {PenaltyKind::Cdf, lambda, nu, std::nullopt};
}

PenaltyConfig PenaltyConfig::lasso(double lambda) {
  return {PenaltyKind::Lasso, lambda, std::nullopt, std::nullopt};
}

PenaltyConfig PenaltyConfig::scad(double lambda, double gamma) {
  return {PenaltyKind::Scad, lambda, std::nullopt, gamma};
}

PenaltyConfig PenaltyConfig::mcp(double lambda, double gamma) {
  return {PenaltyKind::Mcp, lambda, std::nullopt, gamma};
}

PenaltyConfig PenaltyConfig::with_lambda(double lambda) const {
  return {kind_, lambda, nu_, gamma_};
}

std::string PenaltyConfig::describe() const {
  std::ostringstream out;
  out << to_string(kind_) << "(lambda=" << lambda_;
  if (nu_) out << ", nu=" << *nu_;
  if (gamma_) out << ", gamma=" << *gamma_;
  out << ")";
  return out.str();
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double penalty_value(const PenaltyConfig& cfg, double beta) {
  const double a = std::abs(beta);
  const double lam = cfg.lambda();
  switch (cfg.kind()) {
    case PenaltyKind::Cdf: {
      const double nu = *cfg.nu();
      return lam * kSqrt2Pi * nu * normal_cdf(a / nu);
    }
    case PenaltyKind::Lasso:
      return lam * a;
    case PenaltyKind::Scad: {
      const double g = *cfg.gamma();
      if (a <= lam) return lam * a;
      if (a <= g * lam) return (2.0 * g * lam * a - a * a - lam * lam) / (2.0 * (g - 1.0));
      return lam * lam * (g + 1.0) / 2.0;
    }
    case PenaltyKind::Mcp: {
      const double g = *cfg.gamma();
      if (a <= g * lam) return lam * a - a * a / (2.0 * g);
      return g * lam * lam / 2.0;
    }
  }
  return 0.0;
}

namespace detail {

double derivative_abs(const PenaltyConfig& cfg, double a) {
  const double lam = cfg.lambda();
  switch (cfg.kind()) {
    case PenaltyKind::Cdf: {
      // lambda * sqrt(2 pi) * phi(a / nu)
      const double t = a / *cfg.nu();
      return lam * std::exp(-0.5 * t * t);
    }
    case PenaltyKind::Lasso:
      return lam;
    case PenaltyKind::Scad: {
      const double g = *cfg.gamma();
      if (a <= lam) return lam;
      return std::max(g * lam - a, 0.0) / (g - 1.0);
    }
    case PenaltyKind::Mcp: {
      const double g = *cfg.gamma();
      if (a <= g * lam) return lam - a / g;
      return 0.0;
    }
  }
  return 0.0;
}

}  // namespace detail

double penalty_derivative(const PenaltyConfig& cfg, double beta) {
  if (!(beta > 0.0)) {
    throw ValidationError("penalty_derivative requires beta > 0 (use d_zero_plus at the origin)");
  }
  return detail::derivative_abs(cfg, beta);
}

double d_zero_plus(const PenaltyConfig& cfg) { return detail::derivative_abs(cfg, 0.0); }

double cdf_second_derivative(const PenaltyConfig& cfg, double beta) {
  if (cfg.kind() != PenaltyKind::Cdf) {
    throw ValidationError("cdf_second_derivative requires a CDF penalty, got " +
                          std::string(to_string(cfg.kind())));
  }
  if (!(beta > 0.0)) throw ValidationError("cdf_second_derivative requires beta > 0");
  const double nu = *cfg.nu();
  const double t = beta / nu;
  return -cfg.lambda() * (beta / (nu * nu)) * std::exp(-0.5 * t * t);
}

double nu_min(double lambda, double convexity_floor) {
  if (!(convexity_floor > 0.0) || !std::isfinite(convexity_floor)) {
    throw ValidationError("convexity_floor must be a finite value > 0");
  }
  if (!(lambda >= 0.0)) throw ValidationError("lambda must be >= 0");
  return std::max(lambda * std::exp(-0.5) / convexity_floor, kNuFloor);
}

}  // namespace cdfpen
