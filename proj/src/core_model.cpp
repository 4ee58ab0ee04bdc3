#include "cdfpen/core_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cdfpen {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos
                                                ? std::string_view::npos
                                                : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

Dataset::Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, std::vector<std::string> column_names)
    : x_(std::move(x)), y_(std::move(y)), names_(std::move(column_names)) {
  if (x_.rows() < 2) throw ValidationError("n < 2: need at least two observations");
  if (x_.cols() < 1) throw ValidationError("p < 1: need at least one covariate");
  if (y_.size() != x_.rows()) {
    throw ValidationError("response length " + std::to_string(y_.size()) +
                          " does not match " + std::to_string(x_.rows()) + " design rows");
  }
  if (!x_.allFinite()) throw ValidationError("design matrix contains non-finite values");
  if (!y_.allFinite()) throw ValidationError("response contains non-finite values");
  if (!names_.empty() && static_cast<Eigen::Index>(names_.size()) != x_.cols()) {
    throw ValidationError("column_names has " + std::to_string(names_.size()) +
                          " entries, expected " + std::to_string(x_.cols()));
  }
}

std::string Dataset::column_label(Eigen::Index j) const {
  if (!names_.empty()) return names_[static_cast<std::size_t>(j)];
  return "x" + std::to_string(j + 1);
}

Eigen::Index FitResult::nonzeros() const {
  Eigen::Index count = 0;
  for (Eigen::Index j = 0; j < beta_std.size(); ++j) count += beta_std[j] != 0.0;
  return count;
}

Dataset parse_dataset(const std::string& text, const ColumnRef& y_column) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) {
      header = split_row(line);
      break;
    }
  }
  if (header.empty()) throw ValidationError("CSV input is empty (header row required)");
  for (auto& h : header) h = unquote(h);

  std::size_t y_idx = 0;
  if (const auto* name = std::get_if<std::string>(&y_column)) {
    auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) throw ValidationError("y column '" + *name + "' not found in header");
    y_idx = static_cast<std::size_t>(it - header.begin());
  } else {
    y_idx = std::get<std::size_t>(y_column);
    if (y_idx >= header.size()) {
      throw ValidationError("y column index " + std::to_string(y_idx) + " out of range (" +
                            std::to_string(header.size()) + " columns)");
    }
  }
  if (header.size() < 2) throw ValidationError("CSV needs at least one covariate besides y");

  std::vector<std::vector<double>> rows;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row_no;
    auto cells = split_row(line);
    if (cells.size() != header.size()) {
      throw ValidationError("row " + std::to_string(row_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
    }
    std::vector<double> values(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (!parse_double(cells[j], values[j])) {
        throw ValidationError("non-numeric cell at row " + std::to_string(row_no) +
                              ", column " + std::to_string(j + 1) + " ('" + header[j] + "')");
      }
    }
    rows.push_back(std::move(values));
  }
  if (rows.size() < 2) throw ValidationError("n < 2: need at least two observations");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(header.size() - 1);
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != y_idx) names.push_back(header[j]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    Eigen::Index col = 0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j == y_idx) {
        y[i] = r[j];
      } else {
        x(i, col++) = r[j];
      }
    }
  }
  return Dataset(std::move(x), std::move(y), std::move(names));
}

Dataset load_dataset(const std::filesystem::path& path, const ColumnRef& y_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), y_column);
}

StandardizedDesign standardize(const Dataset& d) {
  const Eigen::Index n = d.n();
  const Eigen::Index p = d.p();
  StandardizedDesign out;
  out.means_ = d.x().colwise().mean().transpose();
  out.sds_.resize(p);
  out.xs_.resize(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    Eigen::VectorXd centered = d.x().col(j).array() - out.means_[j];
    const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(n));
    if (!(sd > 1e-12 * std::max(1.0, std::abs(out.means_[j])))) {
      throw ValidationError("constant column " + std::to_string(j + 1) + " ('" +
                            d.column_label(j) + "') cannot be standardized");
    }
    out.sds_[j] = sd;
    out.xs_.col(j) = centered / sd;
  }
  out.y_mean_ = d.y().mean();
  out.yc_ = d.y().array() - out.y_mean_;
  return out;
}

std::pair<Eigen::VectorXd, double> destandardize(const Eigen::VectorXd& beta_std,
                                                 const StandardizedDesign& design) {
  if (beta_std.size() != design.p()) {
    throw ValidationError("coefficient length " + std::to_string(beta_std.size()) +
                          " does not match p = " + std::to_string(design.p()));
  }
  Eigen::VectorXd beta = beta_std.cwiseQuotient(design.col_sds());
  const double intercept = design.y_mean() - beta.dot(design.col_means());
  return {std::move(beta), intercept};
}

}  // namespace cdfpen
