#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace symphonic {

struct PointRecord {
  std::vector<double> point;
  std::vector<double> image;  // u(x) where the right-hand side was evaluated; may be empty
  std::vector<double> lhs;
  std::vector<double> rhs;
  double residual = 0.0;
};

/// Outcome of checking one identity or predicate at a set of sample points.
///
/// `rhs` already carries any scaling factor, and verdict is max_residual <
/// tolerance over the points that were evaluated. A report with no evaluated
/// points never passes.
struct ResidualReport {
  std::string identity_name;
  std::vector<PointRecord> per_point;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  std::optional<double> fitted_exponent;
  double tolerance = 0.0;
  bool verdict = false;
  std::size_t excluded_points = 0;
  std::vector<std::string> annotations;
  std::vector<std::string> warnings;

  void add(PointRecord record) { per_point.push_back(std::move(record)); }
  void finalize(double tol);
};

std::vector<double> to_std(const Eigen::VectorXd& v);

/// Euclidean norm of lhs - rhs.
double residual_norm(const Eigen::VectorXd& lhs, const Eigen::VectorXd& rhs);

} // namespace symphonic
