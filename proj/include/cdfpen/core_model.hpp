#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cdfpen/error.hpp"
#include "cdfpen/penalties.hpp"

namespace cdfpen {

/**
 * Raw regression data: an n x p design and a response of length n.
 *
 * Construction validates shapes and finiteness; the object is immutable
 * afterwards.
 */
class Dataset {
 public:
  Dataset(Eigen::MatrixXd x, Eigen::VectorXd y,
          std::vector<std::string> column_names = {});

  const Eigen::MatrixXd& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  // Empty when the data came without labels.
  const std::vector<std::string>& column_names() const { return names_; }

  Eigen::Index n() const { return x_.rows(); }
  Eigen::Index p() const { return x_.cols(); }

  // Label of column j, falling back to "x<j+1>".
  std::string column_label(Eigen::Index j) const;

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  std::vector<std::string> names_;
};

/// Column mean 0 / population-sd 1 version of a Dataset, with a centered response.
class StandardizedDesign {
 public:
  const Eigen::MatrixXd& xs() const { return xs_; }
  const Eigen::VectorXd& y_centered() const { return yc_; }
  const Eigen::VectorXd& col_means() const { return means_; }
  const Eigen::VectorXd& col_sds() const { return sds_; }
  double y_mean() const { return y_mean_; }

  Eigen::Index n() const { return xs_.rows(); }
  Eigen::Index p() const { return xs_.cols(); }

 private:
  friend StandardizedDesign standardize(const Dataset& d);
  StandardizedDesign() = default;

  Eigen::MatrixXd xs_;
  Eigen::VectorXd yc_;
  Eigen::VectorXd means_;
  Eigen::VectorXd sds_;
  double y_mean_ = 0.0;
};

/// One penalized least-squares fit at a single (lambda, penalty) pair.
struct FitResult {
  PenaltyConfig penalty;
  Eigen::VectorXd beta;      // original covariate scale
  double intercept = 0.0;
  Eigen::VectorXd beta_std;  // standardized scale, exact zeros preserved
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double rho = 0.0;          // augmented-Lagrangian parameter at exit
  bool converged = false;
  double objective = 0.0;

  Eigen::Index nonzeros() const;
};

/// A regularization path: fits ordered by strictly decreasing lambda.
struct PathResult {
  PenaltyKind kind = PenaltyKind::Lasso;
  std::string nu_rule;            // "fixed", "nu_min", "nu_bar" or "" for non-CDF
  std::optional<double> gamma;    // SCAD / MCP shape
  double convexity_floor = 0.0;
  Eigen::VectorXd lambdas;
  std::vector<FitResult> fits;
  std::vector<Eigen::Index> nonzero_counts;
};

// Column selector for load_dataset: a header name or a zero-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

/// Reads a comma-separated file with a header row. The response column is
/// removed and the remaining columns form the design, in file order.
Dataset load_dataset(const std::filesystem::path& path, const ColumnRef& y_column);

/// Parses CSV text already in memory (same rules as load_dataset).
Dataset parse_dataset(const std::string& text, const ColumnRef& y_column);

StandardizedDesign standardize(const Dataset& d);

/// Maps standardized coefficients back to the original scale.
std::pair<Eigen::VectorXd, double> destandardize(const Eigen::VectorXd& beta_std,
                                                 const StandardizedDesign& design);

}  // namespace cdfpen
