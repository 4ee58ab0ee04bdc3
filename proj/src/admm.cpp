#include "cdfpen/admm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cdfpen/error.hpp"
#include "cdfpen/prox.hpp"

namespace cdfpen {

void AdmmConfig::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ValidationError("rho must be > 0");
  if (!(tol_primal > 0.0)) throw ValidationError("tol_primal must be > 0");
  if (!(tol_dual > 0.0)) throw ValidationError("tol_dual must be > 0");
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (!(over_relaxation >= 1.0 && over_relaxation <= 1.8)) {
    throw ValidationError("over_relaxation must lie in [1, 1.8]");
  }
  if (adapt_every < 1) throw ValidationError("adapt_every must be >= 1");
  if (relaxation_patience < 1) throw ValidationError("relaxation_patience must be >= 1");
}

RidgeFactorization::RidgeFactorization(const Eigen::MatrixXd& xs, double rho)
    : xs_(&xs), rho_(rho), woodbury_(xs.cols() > xs.rows()) {
  const auto n = static_cast<double>(xs.rows());
  if (woodbury_) {
    Eigen::MatrixXd small = xs * xs.transpose();
    small.diagonal().array() += n * rho;
    llt_.compute(small);
  } else {
    Eigen::MatrixXd gram = xs.transpose() * xs / n;
    gram.diagonal().array() += rho;
    llt_.compute(gram);
  }
  if (llt_.info() != Eigen::Success) {
    throw SolverError("ridge system factorization failed (rho=" + std::to_string(rho) + ")");
  }
}

Eigen::VectorXd RidgeFactorization::solve(const Eigen::VectorXd& rhs) const {
  if (!woodbury_) return llt_.solve(rhs);
  // (rho I + X'X/n)^{-1} = (1/rho) [I - X' (n rho I + X X')^{-1} X]
  const Eigen::VectorXd inner = llt_.solve(*xs_ * rhs);
  return (rhs - xs_->transpose() * inner) / rho_;
}

double rho_floor(const PenaltyConfig& cfg) {
  if (cfg.kind() != PenaltyKind::Cdf) return 0.0;
  return cfg.lambda() * std::exp(-0.5) / *cfg.nu();
}

bool adapt_rho(AdmmState& state, double primal, double dual, const PenaltyConfig& cfg,
               const StandardizedDesign& design) {
  double next = state.rho;
  if (primal > 10.0 * dual) {
    next = 2.0 * state.rho;
  } else if (dual > 10.0 * primal) {
    next = std::max(0.5 * state.rho, rho_floor(cfg));
    if (next > state.rho) next = state.rho;
  }
  if (next == state.rho) return false;
  state.u *= state.rho / next;
  state.rho = next;
  state.factor = std::make_shared<const RidgeFactorization>(design.xs(), next);
  return true;
}

double penalized_objective(const StandardizedDesign& design, const PenaltyConfig& cfg,
                           const Eigen::VectorXd& beta_std) {
  const Eigen::VectorXd resid = design.y_centered() - design.xs() * beta_std;
  double pen = 0.0;
  for (Eigen::Index j = 0; j < beta_std.size(); ++j) pen += penalty_value(cfg, beta_std[j]);
  return resid.squaredNorm() / (2.0 * static_cast<double>(design.n())) + pen;
}

AdmmState cold_start(const StandardizedDesign& design, double rho) {
  AdmmState s;
  const Eigen::Index p = design.p();
  s.beta = Eigen::VectorXd::Zero(p);
  s.z = Eigen::VectorXd::Zero(p);
  s.u = design.xs().transpose() * design.y_centered() / (static_cast<double>(design.n()) * rho);
  s.rho = rho;
  return s;
}

FitResult fit(const StandardizedDesign& design, const PenaltyConfig& cfg,
              const AdmmConfig& acfg, AdmmState& state) {
  acfg.validate();
  const Eigen::Index p = design.p();
  if (state.z.size() == 0) state = cold_start(design, acfg.rho);
  if (state.z.size() != p || state.u.size() != p) {
    throw ValidationError("warm-start state has length " + std::to_string(state.z.size()) +
                          ", expected p = " + std::to_string(p));
  }
  if (state.beta.size() != p) state.beta = state.z;
  if (!(state.rho > 0.0)) state.rho = acfg.rho;
  if (!state.factor || state.factor->rho() != state.rho) {
    state.factor = std::make_shared<const RidgeFactorization>(design.xs(), state.rho);
  }

  const double n = static_cast<double>(design.n());
  const double sqrt_p = std::sqrt(static_cast<double>(p));
  double alpha = acfg.over_relaxation;
  const Eigen::VectorXd xty = design.xs().transpose() * design.y_centered() / n;

  Eigen::VectorXd z_prev(p);
  Eigen::VectorXd relaxed(p);
  double primal_scaled = 0.0;
  double dual_scaled = 0.0;
  bool converged = false;
  int iter = 0;
  while (iter < acfg.max_iter) {
    ++iter;
    // Relaxed steps can cycle when the prox is nonconvex.
    if (iter > acfg.relaxation_patience) alpha = 1.0;
    state.beta = state.factor->solve(xty + state.rho * (state.z - state.u));
    z_prev = state.z;
    relaxed = alpha * state.beta + (1.0 - alpha) * z_prev;
    state.z = prox_vector(relaxed + state.u, 1.0 / state.rho, cfg);
    state.u += relaxed - state.z;

    if (!state.beta.allFinite() || !state.u.allFinite()) {
      throw SolverError("ADMM diverged at iteration " + std::to_string(iter) +
                        " (rho=" + std::to_string(state.rho) + ")");
    }
    const double primal = (state.beta - state.z).norm();
    const double dual = state.rho * (state.z - z_prev).norm();
    primal_scaled = primal / (sqrt_p * (1.0 + std::max(state.beta.norm(), state.z.norm())));
    dual_scaled = dual / (sqrt_p * (1.0 + state.rho * state.u.norm()));
    if (primal_scaled <= acfg.tol_primal && dual_scaled <= acfg.tol_dual) {
      converged = true;
      break;
    }
    if (acfg.adapt_rho && iter % acfg.adapt_every == 0) {
      adapt_rho(state, primal, dual, cfg, design);
    }
  }
  state.iterations += iter;

  FitResult out{.penalty = cfg, .beta = {}, .intercept = 0.0, .beta_std = {}};
  out.beta_std = state.z;
  auto [beta, intercept] = destandardize(state.z, design);
  out.beta = std::move(beta);
  out.intercept = intercept;
  out.iterations = iter;
  out.primal_residual = primal_scaled;
  out.dual_residual = dual_scaled;
  out.rho = state.rho;
  out.converged = converged;
  out.objective = penalized_objective(design, cfg, state.z);
  return out;
}

FitResult fit(const StandardizedDesign& design, const PenaltyConfig& cfg,
              const AdmmConfig& acfg, const std::optional<AdmmState>& warm) {
  AdmmState state = warm ? *warm : cold_start(design, acfg.rho);
  return fit(design, cfg, acfg, state);
}

}  // namespace cdfpen
