#include "symphonic/report.hpp"

#include <algorithm>
#include <cmath>

namespace symphonic {

void ResidualReport::finalize(double tol) {
  tolerance = tol;
  max_residual = 0.0;
  mean_residual = 0.0;
  bool finite = true;
  for (const auto& r : per_point) {
    if (!std::isfinite(r.residual)) finite = false;
    max_residual = std::max(max_residual, r.residual);
    mean_residual += r.residual;
  }
  if (!per_point.empty()) mean_residual /= static_cast<double>(per_point.size());
  if (!finite) max_residual = mean_residual = std::nan("");
  verdict = !per_point.empty() && finite && max_residual < tol;
  if (per_point.empty()) warnings.emplace_back("no sample point could be evaluated");
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

double residual_norm(const Eigen::VectorXd& lhs, const Eigen::VectorXd& rhs) {
  return (lhs - rhs).norm();
}

} // namespace symphonic
