#include "cdfpen/path.hpp"

#include <cmath>
#include <string>

#include "cdfpen/error.hpp"
#include "cdfpen/report_io.hpp"

namespace cdfpen {

std::string nu_rule_name(const NuRule& rule) {
  if (std::holds_alternative<NuMin>(rule)) return "nu_min";
  if (std::holds_alternative<NuBar>(rule)) return "nu_bar";
  return "fixed:" + format_number(std::get<NuFixed>(rule).nu);
}

NuRule parse_nu_rule(const std::string& text) {
  std::string t = text;
  for (char& c : t) {
    if (c == '_') c = '-';
  }
  if (t == "nu-min" || t == "numin") return NuMin{};
  if (t == "nu-bar" || t == "nubar") return NuBar{};
  if (t.rfind("fixed:", 0) == 0) {
    try {
      std::size_t used = 0;
      const double nu = std::stod(t.substr(6), &used);
      if (used == t.size() - 6 && nu > 0.0 && std::isfinite(nu)) return NuFixed{nu};
    } catch (const std::exception&) {
    }
    throw ValidationError("invalid fixed nu in '" + text + "'");
  }
  throw ValidationError("unknown nu rule '" + text + "' (expected nu-min, nu-bar or fixed:<nu>)");
}

void PathSpec::validate() const {
  if (n_lambda < 2) throw ValidationError("n_lambda must be >= 2");
  if (!(lambda_min_ratio > 0.0 && lambda_min_ratio < 1.0)) {
    throw ValidationError("lambda_min_ratio must lie in (0, 1)");
  }
  if (const auto* f = std::get_if<NuFixed>(&nu_rule); f && !(f->nu > 0.0)) {
    throw ValidationError("fixed nu must be > 0");
  }
  if (gamma && kind != PenaltyKind::Scad && kind != PenaltyKind::Mcp) {
    throw ValidationError("gamma is only valid for scad and mcp");
  }
  // Range checks on gamma happen in PenaltyConfig.
  if (gamma) (void)(kind == PenaltyKind::Scad ? PenaltyConfig::scad(0.0, *gamma)
                                               : PenaltyConfig::mcp(0.0, *gamma));
}

double lambda_max(const StandardizedDesign& design, PenaltyKind /*kind*/) {
  // d_zero_plus = lambda for every supported kind, so the KKT bound is shared.
  const Eigen::VectorXd c = design.xs().transpose() * design.y_centered();
  return c.cwiseAbs().maxCoeff() / static_cast<double>(design.n());
}

Eigen::VectorXd lambda_grid(double lmax, const PathSpec& spec) {
  spec.validate();
  if (!(lmax > 0.0)) throw ValidationError("null model everywhere; nothing to fit");
  const int count = spec.n_lambda;
  Eigen::VectorXd grid(count);
  const double log_max = std::log(lmax);
  const double log_ratio = std::log(spec.lambda_min_ratio);
  for (int k = 0; k < count; ++k) {
    grid[k] = std::exp(log_max + log_ratio * static_cast<double>(k) / (count - 1));
  }
  grid[0] = lmax;
  grid[count - 1] = lmax * spec.lambda_min_ratio;
  return grid;
}

double nu_for_lambda(double lambda, const NuRule& rule, double floor) {
  if (const auto* f = std::get_if<NuFixed>(&rule)) return f->nu;
  const double lo = nu_min(lambda, floor);
  if (std::holds_alternative<NuBar>(rule)) return (lo + kNuLassoLike) / 2.0;
  return lo;
}

double convexity_floor(const StandardizedDesign& design, double rho) {
  if (design.p() > design.n()) return rho;
  const Eigen::MatrixXd gram =
      design.xs().transpose() * design.xs() / static_cast<double>(design.n());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues().minCoeff();
  return smallest >= 1e-8 ? smallest : rho;
}

PenaltyConfig penalty_at(const PathSpec& spec, double lambda, double floor) {
  switch (spec.kind) {
    case PenaltyKind::Cdf: return PenaltyConfig::cdf(lambda, nu_for_lambda(lambda, spec.nu_rule, floor));
    case PenaltyKind::Lasso: return PenaltyConfig::lasso(lambda);
    case PenaltyKind::Scad: return PenaltyConfig::scad(lambda, spec.gamma.value_or(kDefaultGammaScad));
    case PenaltyKind::Mcp: return PenaltyConfig::mcp(lambda, spec.gamma.value_or(kDefaultGammaMcp));
  }
  throw ValidationError("unknown penalty kind");
}

PathResult fit_path(const StandardizedDesign& design, const PathSpec& spec,
                    const AdmmConfig& acfg) {
  spec.validate();
  acfg.validate();
  PathResult out;
  out.kind = spec.kind;
  out.nu_rule = spec.kind == PenaltyKind::Cdf ? nu_rule_name(spec.nu_rule) : "";
  if (spec.kind == PenaltyKind::Scad) out.gamma = spec.gamma.value_or(kDefaultGammaScad);
  if (spec.kind == PenaltyKind::Mcp) out.gamma = spec.gamma.value_or(kDefaultGammaMcp);
  out.convexity_floor = convexity_floor(design, acfg.rho);
  out.lambdas = lambda_grid(lambda_max(design, spec.kind), spec);

  AdmmState state = cold_start(design, acfg.rho);
  out.fits.reserve(static_cast<std::size_t>(spec.n_lambda));
  for (int k = 0; k < spec.n_lambda; ++k) {
    const PenaltyConfig cfg = penalty_at(spec, out.lambdas[k], out.convexity_floor);
    try {
      out.fits.push_back(fit(design, cfg, acfg, state));
    } catch (const SolverError& e) {
      throw SolverError("lambda index " + std::to_string(k) + " (lambda=" +
                        format_number(out.lambdas[k]) + "): " + e.what());
    }
    out.nonzero_counts.push_back(out.fits.back().nonzeros());
  }
  return out;
}

void write_path_coefficients(std::ostream& out, const PathResult& path, const Dataset* data) {
  out << "lambda_index,lambda,coef_index,name,beta_std,beta\n";
  for (std::size_t k = 0; k < path.fits.size(); ++k) {
    const FitResult& f = path.fits[k];
    for (Eigen::Index j = 0; j < f.beta_std.size(); ++j) {
      if (f.beta_std[j] == 0.0) continue;
      const std::string name = data ? data->column_label(j) : "x" + std::to_string(j + 1);
      out << k << ',' << format_number(path.lambdas[static_cast<Eigen::Index>(k)]) << ',' << j
          << ',' << csv_field(name) << ',' << format_number(f.beta_std[j]) << ','
          << format_number(f.beta[j]) << '\n';
    }
  }
}

void write_path_summary(std::ostream& out, const PathResult& path) {
  out << "lambda_index,lambda,nu,gamma,nonzeros,objective,iterations,converged,intercept\n";
  for (std::size_t k = 0; k < path.fits.size(); ++k) {
    const FitResult& f = path.fits[k];
    out << k << ',' << format_number(f.penalty.lambda()) << ','
        << (f.penalty.nu() ? format_number(*f.penalty.nu()) : "") << ','
        << (f.penalty.gamma() ? format_number(*f.penalty.gamma()) : "") << ','
        << path.nonzero_counts[k] << ',' << format_number(f.objective) << ',' << f.iterations
        << ',' << (f.converged ? 1 : 0) << ',' << format_number(f.intercept) << '\n';
  }
}

}  // namespace cdfpen
