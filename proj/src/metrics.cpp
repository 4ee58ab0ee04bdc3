#include "cdfpen/metrics.hpp"

#include <algorithm>
#include <string>

#include "cdfpen/error.hpp"

namespace cdfpen {

namespace {

void check_length(const Eigen::VectorXd& estimate, const TruthSpec& truth) {
  if (estimate.size() != truth.p()) {
    throw ValidationError("estimate has length " + std::to_string(estimate.size()) +
                          ", truth has p = " + std::to_string(truth.p()));
  }
}

}  // namespace

TruthSpec::TruthSpec(Eigen::VectorXd beta_true) : beta_(std::move(beta_true)) {
  for (Eigen::Index j = 0; j < beta_.size(); ++j) {
    if (beta_[j] != 0.0) support_.push_back(j);
  }
}

double mse(const std::vector<Eigen::VectorXd>& estimates, const TruthSpec& truth) {
  if (estimates.empty()) throw ValidationError("mse needs at least one replicate");
  double total = 0.0;
  for (const auto& est : estimates) {
    check_length(est, truth);
    total += (est - truth.beta()).squaredNorm();
  }
  return total / (static_cast<double>(estimates.size()) * static_cast<double>(truth.p()));
}

double fpr(const Eigen::VectorXd& estimate, const TruthSpec& truth) {
  check_length(estimate, truth);
  if (truth.n_zero() == 0) throw ValidationError("fpr undefined: truth has no zero coefficients");
  Eigen::Index false_pos = 0;
  for (Eigen::Index j = 0; j < estimate.size(); ++j) {
    false_pos += truth.beta()[j] == 0.0 && estimate[j] != 0.0;
  }
  return static_cast<double>(false_pos) / static_cast<double>(truth.n_zero());
}

double tpr(const Eigen::VectorXd& estimate, const TruthSpec& truth) {
  check_length(estimate, truth);
  if (truth.support().empty()) throw ValidationError("tpr undefined: truth has empty support");
  Eigen::Index hits = 0;
  for (Eigen::Index j : truth.support()) hits += estimate[j] != 0.0;
  return static_cast<double>(hits) / static_cast<double>(truth.support().size());
}

RocCurve roc_from_points(std::vector<RocPoint> sweep) {
  sweep.push_back({0.0, 0.0});
  sweep.push_back({1.0, 1.0});
  std::sort(sweep.begin(), sweep.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr < b.fpr || (a.fpr == b.fpr && a.tpr > b.tpr);
  });
  RocCurve curve;
  for (const RocPoint& pt : sweep) {
    if (curve.points.empty() || curve.points.back().fpr != pt.fpr) curve.points.push_back(pt);
  }
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    curve.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return curve;
}

RocCurve roc_auc(const PathResult& path, const TruthSpec& truth) {
  if (path.fits.empty()) throw ValidationError("roc_auc needs a nonempty path");
  std::vector<RocPoint> sweep;
  sweep.reserve(path.fits.size());
  for (const FitResult& f : path.fits) sweep.push_back({fpr(f.beta, truth), tpr(f.beta, truth)});
  return roc_from_points(std::move(sweep));
}

}  // namespace cdfpen
