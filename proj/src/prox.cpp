#include "cdfpen/prox.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>

#include "cdfpen/error.hpp"

namespace cdfpen {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kInvSqrtE = 0.60653065971263342;  // exp(-1/2)
constexpr double kNewtonTol = 1e-12;
constexpr int kNewtonMaxIter = 100;
// Slack on the CDF convexity test; nu = nu_min lands exactly on the boundary.
constexpr double kConvexSlack = 1e-12;

// Objective relative to z = 0 on the half-line of v: w >= 0, a = |v|.
double delta_objective(double w, double a, double tau, const PenaltyConfig& cfg) {
  const double quad = w * (w - 2.0 * a) / (2.0 * tau);
  if (cfg.kind() == PenaltyKind::Cdf) {
    const double nu = *cfg.nu();
    return quad + cfg.lambda() * kSqrt2Pi * nu * 0.5 * std::erf(w / (nu * std::numbers::sqrt2));
  }
  return quad + penalty_value(cfg, w);
}

// Picks the best candidate among {0} and `cands`; exact ties go to the smaller w.
template <typename Range>
double best_candidate(const Range& cands, double a, double tau, const PenaltyConfig& cfg) {
  double best = 0.0;
  double best_delta = 0.0;
  for (double w : cands) {
    if (!(w > 0.0)) continue;
    const double d = delta_objective(w, a, tau, cfg);
    if (d < best_delta || (d == best_delta && w < best)) {
      best = w;
      best_delta = d;
    }
  }
  return best;
}

struct CdfStationarity {
  double a;
  double scale;  // tau * lambda
  double nu;

  double f(double w) const {
    const double t = w / nu;
    return w + scale * std::exp(-0.5 * t * t) - a;
  }
  double df(double w) const {
    const double t = w / nu;
    return 1.0 - scale * (t / nu) * std::exp(-0.5 * t * t);
  }
};

// Newton on [lo, hi] with bisection whenever a step leaves the bracket.
double safeguarded_newton(const CdfStationarity& eq, double lo, double hi, double start) {
  double f_lo = eq.f(lo);
  const double f_hi = eq.f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw SolverError("CDF prox: invalid root bracket [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  const bool lo_negative = f_lo < 0.0;
  const double tol = kNewtonTol * std::max(1.0, eq.a);
  double x = std::clamp(start, lo, hi);
  for (int it = 0; it < kNewtonMaxIter; ++it) {
    const double fx = eq.f(x);
    if (std::abs(fx) <= tol) return x;
    if ((fx < 0.0) == lo_negative) {
      lo = x;
    } else {
      hi = x;
    }
    const double d = eq.df(x);
    double next = d != 0.0 ? x - fx / d : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return next;
    x = next;
  }
  // Newton stalled: finish by bisection on the current bracket.
  f_lo = eq.f(lo);
  while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    const double fm = eq.f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Roots of t * exp(-t^2 / 2) = c for 0 < c < exp(-1/2): one in (0, 1), one in (1, inf).
std::pair<double, double> hump_crossings(double c) {
  auto q = [c](double t) { return t * std::exp(-0.5 * t * t) - c; };
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (q(mid) < 0.0 ? lo : hi) = mid;
  }
  const double t1 = 0.5 * (lo + hi);
  double top = 2.0;
  while (q(top) > 0.0) top *= 2.0;
  lo = 1.0;
  hi = top;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (q(mid) > 0.0 ? lo : hi) = mid;
  }
  return {t1, 0.5 * (lo + hi)};
}

bool cdf_convex(double tau, const PenaltyConfig& cfg) {
  return tau * cfg.lambda() * kInvSqrtE / *cfg.nu() <= 1.0 + kConvexSlack;
}

// All positive roots of the CDF stationarity equation for input magnitude a.
std::array<double, 3> cdf_roots(double a, double tau, const PenaltyConfig& cfg, int& count) {
  count = 0;
  std::array<double, 3> roots{};
  const CdfStationarity eq{a, tau * cfg.lambda(), *cfg.nu()};
  if (cdf_convex(tau, cfg)) {
    if (a > eq.scale) roots[count++] = safeguarded_newton(eq, 0.0, a, a);
    return roots;
  }
  // f is increasing on [0, w1], decreasing on [w1, w2], increasing beyond.
  const auto [t1, t2] = hump_crossings(eq.nu / eq.scale);
  const std::array<double, 4> knots{0.0, eq.nu * t1, eq.nu * t2, a};
  for (int s = 0; s < 3; ++s) {
    const double lo = knots[s];
    const double hi = std::min(knots[s + 1], a);
    if (!(lo < hi)) continue;
    const double f_lo = eq.f(lo);
    const double f_hi = eq.f(hi);
    double root = -1.0;
    if (f_lo == 0.0) {
      root = lo;
    } else if ((f_lo < 0.0) != (f_hi < 0.0) || f_hi == 0.0) {
      root = safeguarded_newton(eq, lo, hi, 0.5 * (lo + hi));
    }
    if (root > 0.0 && (count == 0 || root > roots[count - 1])) roots[count++] = root;
  }
  return roots;
}

double prox_cdf_abs(double a, double tau, const PenaltyConfig& cfg) {
  if (a <= 0.0 || cfg.lambda() == 0.0) return a;
  if (cdf_convex(tau, cfg)) {
    if (a <= tau * cfg.lambda()) return 0.0;
    const CdfStationarity eq{a, tau * cfg.lambda(), *cfg.nu()};
    return safeguarded_newton(eq, 0.0, a, a);
  }
  int count = 0;
  const auto roots = cdf_roots(a, tau, cfg, count);
  return best_candidate(std::span<const double>(roots.data(), static_cast<std::size_t>(count)),
                        a, tau, cfg);
}

// Exact minimization over the quadratic pieces of SCAD / MCP on [0, a].
double prox_piecewise_abs(double a, double tau, const PenaltyConfig& cfg) {
  struct Piece {
    double lo, hi, lin, quad;  // p(w) = const + lin * w + quad * w^2 on [lo, hi]
  };
  const double lam = cfg.lambda();
  const double g = *cfg.gamma();
  std::array<Piece, 3> pieces{};
  int n_pieces = 0;
  if (cfg.kind() == PenaltyKind::Scad) {
    pieces[n_pieces++] = {0.0, lam, lam, 0.0};
    pieces[n_pieces++] = {lam, g * lam, g * lam / (g - 1.0), -0.5 / (g - 1.0)};
    pieces[n_pieces++] = {g * lam, a, 0.0, 0.0};
  } else {
    pieces[n_pieces++] = {0.0, g * lam, lam, -0.5 / g};
    pieces[n_pieces++] = {g * lam, a, 0.0, 0.0};
  }
  std::array<double, 9> cands{};
  int nc = 0;
  for (int i = 0; i < n_pieces; ++i) {
    const Piece& pc = pieces[i];
    const double hi = std::min(pc.hi, a);
    if (pc.lo > hi) continue;
    cands[nc++] = pc.lo;
    cands[nc++] = hi;
    const double curvature = 1.0 / tau + 2.0 * pc.quad;
    if (curvature > 0.0) {
      const double vertex = (a / tau - pc.lin) / curvature;
      if (vertex > pc.lo && vertex < hi) cands[nc++] = vertex;
    }
  }
  return best_candidate(std::span<const double>(cands.data(), static_cast<std::size_t>(nc)), a,
                        tau, cfg);
}

double prox_abs(double a, double tau, const PenaltyConfig& cfg) {
  const double lam = cfg.lambda();
  switch (cfg.kind()) {
    case PenaltyKind::Lasso:
      return std::max(a - tau * lam, 0.0);
    case PenaltyKind::Cdf:
      return prox_cdf_abs(a, tau, cfg);
    case PenaltyKind::Scad: {
      const double g = *cfg.gamma();
      if (lam == 0.0) return a;
      if (tau >= g - 1.0) return prox_piecewise_abs(a, tau, cfg);
      if (a <= lam * (1.0 + tau)) return std::max(a - tau * lam, 0.0);
      if (a <= g * lam) return ((g - 1.0) * a - tau * g * lam) / (g - 1.0 - tau);
      return a;
    }
    case PenaltyKind::Mcp: {
      const double g = *cfg.gamma();
      if (lam == 0.0) return a;
      if (tau >= g) return prox_piecewise_abs(a, tau, cfg);
      if (a <= tau * lam) return 0.0;
      if (a <= g * lam) return (a - tau * lam) / (1.0 - tau / g);
      return a;
    }
  }
  return a;
}

void check_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("prox step tau must be > 0");
}

}  // namespace

double soft_threshold(double v, double t) {
  if (!(t >= 0.0)) throw ValidationError("soft_threshold needs t >= 0");
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

double prox_objective(const ProxRequest& req, double z) {
  const double d = z - req.v;
  return d * d / (2.0 * req.tau) + penalty_value(req.cfg, z);
}

double prox_scalar(const ProxRequest& req) {
  check_tau(req.tau);
  if (!std::isfinite(req.v)) throw SolverError("prox input is not finite");
  const double w = prox_abs(std::abs(req.v), req.tau, req.cfg);
  if (w == 0.0) return 0.0;
  return std::signbit(req.v) ? -w : w;
}

Eigen::VectorXd prox_vector(const Eigen::VectorXd& v, double tau, const PenaltyConfig& cfg) {
  check_tau(tau);
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    try {
      out[i] = prox_scalar({v[i], tau, cfg});
    } catch (const SolverError& e) {
      throw SolverError("component " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

bool prox_is_convex(double tau, const PenaltyConfig& cfg) {
  check_tau(tau);
  if (cfg.lambda() == 0.0) return true;
  switch (cfg.kind()) {
    case PenaltyKind::Lasso: return true;
    case PenaltyKind::Cdf: return cdf_convex(tau, cfg);
    case PenaltyKind::Scad: return tau < *cfg.gamma() - 1.0;
    case PenaltyKind::Mcp: return tau < *cfg.gamma();
  }
  return false;
}

std::vector<double> cdf_stationary_points(double v, double tau, const PenaltyConfig& cfg) {
  check_tau(tau);
  if (cfg.kind() != PenaltyKind::Cdf) {
    throw ValidationError("cdf_stationary_points requires a CDF penalty");
  }
  const double a = std::abs(v);
  if (a == 0.0 || cfg.lambda() == 0.0) return {};
  int count = 0;
  const auto roots = cdf_roots(a, tau, cfg, count);
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(std::signbit(v) ? -roots[i] : roots[i]);
  return out;
}

double cdf_newton_from(double v, double tau, const PenaltyConfig& cfg, double start) {
  check_tau(tau);
  if (cfg.kind() != PenaltyKind::Cdf) throw ValidationError("cdf_newton_from requires a CDF penalty");
  const double a = std::abs(v);
  if (!(a > tau * cfg.lambda())) {
    throw ValidationError("cdf_newton_from requires |v| > tau * lambda");
  }
  const CdfStationarity eq{a, tau * cfg.lambda(), *cfg.nu()};
  const double w = safeguarded_newton(eq, 0.0, a, std::abs(start));
  return std::signbit(v) ? -w : w;
}

}  // namespace cdfpen
