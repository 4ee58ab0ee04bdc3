#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cdfpen/core_model.hpp"

namespace cdfpen {

/// Ground-truth coefficients and their support (indices of nonzeros).
class TruthSpec {
 public:
  explicit TruthSpec(Eigen::VectorXd beta_true);

  const Eigen::VectorXd& beta() const { return beta_; }
  const std::vector<Eigen::Index>& support() const { return support_; }
  Eigen::Index p() const { return beta_.size(); }
  Eigen::Index n_zero() const { return p() - static_cast<Eigen::Index>(support_.size()); }

 private:
  Eigen::VectorXd beta_;
  std::vector<Eigen::Index> support_;
};

/// (1/B)(1/p) sum_b sum_j (beta_hat_bj - beta_j)^2.
double mse(const std::vector<Eigen::VectorXd>& estimates, const TruthSpec& truth);

/// Fraction of true zeros estimated as exactly nonzero.
double fpr(const Eigen::VectorXd& estimate, const TruthSpec& truth);

/// Fraction of true nonzeros estimated as exactly nonzero.
double tpr(const Eigen::VectorXd& estimate, const TruthSpec& truth);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  bool operator==(const RocPoint&) const = default;
};

struct RocCurve {
  std::vector<RocPoint> points;  // sorted by fpr, one point per distinct fpr
  double auc = 0.0;
};

/**
 * Adds the (0,0) and (1,1) anchors, sorts by FPR keeping the largest TPR at
 * each FPR, and integrates with the trapezoid rule.
 */
RocCurve roc_from_points(std::vector<RocPoint> sweep);

/// ROC swept over the lambda path (one point per fit).
RocCurve roc_auc(const PathResult& path, const TruthSpec& truth);

}  // namespace cdfpen
