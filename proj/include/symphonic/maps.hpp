#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symphonic/expr.hpp"
#include "symphonic/geometry.hpp"
#include "symphonic/report.hpp"

namespace symphonic {

class SmoothMap;
using MapPtr = std::shared_ptr<const SmoothMap>;

/// A smooth map between two charts, u^i(x^1, ..., x^m).
///
/// Either a list of component expressions or the composite of two maps; a
/// composite evaluates by feeding the inner map's scalars (of whatever scalar
/// type) into the outer map, so its jets come from nested autodiff rather than
/// from a symbolic composite.
class SmoothMap {
public:
  SmoothMap(std::string name, ManifoldPtr source, ManifoldPtr target,
            std::vector<expr::Expression> components);

  const std::string& name() const { return name_; }
  const ChartManifold& source() const { return *source_; }
  const ChartManifold& target() const { return *target_; }
  const ManifoldPtr& source_ptr() const { return source_; }
  const ManifoldPtr& target_ptr() const { return target_; }

  bool is_composite() const { return outer_ != nullptr; }
  const MapPtr& outer() const { return outer_; }
  const MapPtr& inner() const { return inner_; }

  /// Component expressions; empty for composites.
  const std::vector<expr::Expression>& components() const { return components_; }

  template <class T>
  std::vector<T> evaluate(std::span<const T> x) const {
    if (is_composite()) {
      const auto y = inner_->evaluate(x);
      return outer_->evaluate(std::span<const T>(y));
    }
    std::vector<T> out;
    out.reserve(components_.size());
    for (const auto& c : components_) out.push_back(c.evaluate(x));
    return out;
  }

  /// u(x) on plain doubles, checking every intermediate image against the
  /// relevant target domain.
  std::vector<double> image(std::span<const double> x) const;

  friend MapPtr compose(const MapPtr& outer, const MapPtr& inner, std::string name);

private:
  SmoothMap() = default;

  std::string name_;
  ManifoldPtr source_;
  ManifoldPtr target_;
  std::vector<expr::Expression> components_;
  MapPtr outer_;
  MapPtr inner_;
};

MapPtr make_map(std::string name, ManifoldPtr source, ManifoldPtr target,
                const std::vector<std::string>& components);

/// outer o inner. Requires inner.target and outer.source to have the same
/// dimension; the two are then treated as the same chart.
MapPtr compose(const MapPtr& outer, const MapPtr& inner, std::string name = {});

/// All pointwise first- and second-order data of a map.
///
/// ddu[i](a, b) = d_a d_b u^i; second_fund[i](a, b) = (nabla du)^i_ab;
/// pullback = du^T h(u) du; P = g^{-1} pullback.
struct MapJet {
  Eigen::VectorXd point;
  Eigen::VectorXd image;
  Eigen::MatrixXd du;
  std::vector<Eigen::MatrixXd> ddu;
  Eigen::MatrixXd pullback;
  std::vector<Eigen::MatrixXd> second_fund;
  Eigen::MatrixXd P;
  MetricJet source_metric;
  MetricJet target_metric;
};

MapJet map_jet(const SmoothMap& map, std::span<const double> point);

/// Checks nabla df(du X, du Y) + df(nabla du(X, Y)) = (nabla_X d(f o u)) Y for
/// all coordinate directions X, Y. The left side comes from the jets of f and
/// u separately, the right side from the jet of the composite.
ResidualReport verify_chain_rule(const MapPtr& f, const MapPtr& u, std::span<const double> point);

/// Left and right sides of the chain-rule identity as rank-3 arrays
/// [target component](a, b).
struct ChainRuleSides {
  std::vector<Eigen::MatrixXd> lhs;
  std::vector<Eigen::MatrixXd> rhs;
};

ChainRuleSides chain_rule_sides(const MapPtr& f, const MapPtr& u, std::span<const double> point);

} // namespace symphonic
