#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symphonic/box.hpp"
#include "symphonic/expr.hpp"
#include "symphonic/linalg.hpp"

namespace symphonic {

/// A Riemannian manifold described by one coordinate chart: a box of
/// coordinates and metric components g_ab given as expressions.
///
/// Immutable after construction. Positive-definiteness is only checked where
/// the metric is evaluated.
class ChartManifold {
public:
  /// `metric` is the full dim x dim matrix of component expressions; it must
  /// be symmetric as text trees (g_ab and g_ba parse to the same tree).
  ChartManifold(std::string name, Box domain, std::vector<std::vector<expr::Expression>> metric,
                std::optional<Box> sampling_box = std::nullopt);

  static ChartManifold euclidean(std::size_t dim, std::string name = {},
                                 std::optional<Box> domain = std::nullopt,
                                 std::optional<Box> sampling_box = std::nullopt);

  /// Same chart with a smaller coordinate box.
  ChartManifold restricted(Box domain, std::string name,
                           std::optional<Box> sampling_box = std::nullopt) const;

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  const Box& domain() const { return domain_; }

  /// Finite box that sample points are drawn from. Defaults to the domain
  /// where bounded and (0.25, 1.25) per unbounded side.
  const Box& sampling_box() const { return sampling_box_; }

  const expr::Expression& metric_component(std::size_t a, std::size_t b) const;

  /// True when every metric component is a constant expression.
  bool constant_metric() const { return constant_metric_; }

  template <class T>
  Mat<T> metric(std::span<const T> point) const {
    Mat<T> g(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (std::size_t a = 0; a < dim_; ++a)
      for (std::size_t b = a; b < dim_; ++b) {
        const T v = metric_component(a, b).evaluate(point);
        g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
        g(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
      }
    return g;
  }

  Eigen::MatrixXd metric_at(std::span<const double> point) const { return metric(point); }

private:
  std::string name_;
  std::size_t dim_ = 0;
  Box domain_;
  Box sampling_box_;
  // upper triangle, row-major: (0,0), (0,1), ..., (1,1), ...
  std::vector<expr::Expression> upper_;
  bool constant_metric_ = false;
};

using ManifoldPtr = std::shared_ptr<const ChartManifold>;

/// Metric data at one point. dg[c](a, b) = d_c g_ab; christoffel[c](a, b) = Gamma^c_ab.
struct MetricJet {
  Eigen::VectorXd point;
  Eigen::MatrixXd g;
  Eigen::MatrixXd g_inv;
  std::vector<Eigen::MatrixXd> dg;
  std::vector<Eigen::MatrixXd> christoffel;
};

MetricJet metric_jet(const ChartManifold& manifold, std::span<const double> point);

/// Columns are g-orthonormal frame vectors, E = L^{-T} for g = L L^T. When
/// `rotation` is given the frame is E * rotation (rotation must be orthogonal).
Eigen::MatrixXd orthonormal_frame(const ChartManifold& manifold, std::span<const double> point,
                                  const Eigen::MatrixXd* rotation = nullptr);

/// Levi-Civita symbols from a metric, its inverse and its first derivatives.
std::vector<Eigen::MatrixXd> christoffel_symbols(const Eigen::MatrixXd& g_inv,
                                                 const std::vector<Eigen::MatrixXd>& dg);

} // namespace symphonic
