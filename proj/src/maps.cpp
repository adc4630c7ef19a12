#include "symphonic/maps.hpp"

#include <algorithm>
#include <cmath>

#include "symphonic/autodiff.hpp"

namespace symphonic {

SmoothMap::SmoothMap(std::string name, ManifoldPtr source, ManifoldPtr target,
                     std::vector<expr::Expression> components)
    : name_(std::move(name)), source_(std::move(source)), target_(std::move(target)),
      components_(std::move(components)) {
  if (!source_ || !target_) throw ArgumentError("map '" + name_ + "' needs source and target");
  if (components_.size() != target_->dim())
    throw ArgumentError("map '" + name_ + "' has " + std::to_string(components_.size()) +
                        " components but its target '" + target_->name() + "' has dimension " +
                        std::to_string(target_->dim()));
  for (const auto& c : components_)
    if (c.arity() != source_->dim())
      throw ArgumentError("map '" + name_ + "': component arity differs from source dimension");
}

std::vector<double> SmoothMap::image(std::span<const double> x) const {
  require_inside(source_->domain(), x, "map '" + name_ + "'");
  if (is_composite()) {
    const auto y = inner_->image(x);
    return outer_->image(y);
  }
  auto y = evaluate(x);
  for (double v : y)
    if (!std::isfinite(v))
      throw NonFiniteError("map '" + name_ + "' is not finite at " + format_point(x));
  if (auto bad = target_->domain().first_violation(y)) {
    throw EvaluationError("map '" + name_ + "': image " + format_point(y) + " of " +
                              format_point(x) + " leaves the target domain in coordinate y" +
                              std::to_string(*bad + 1),
                          static_cast<std::ptrdiff_t>(*bad));
  }
  return y;
}

MapPtr make_map(std::string name, ManifoldPtr source, ManifoldPtr target,
                const std::vector<std::string>& components) {
  std::vector<expr::Expression> exprs;
  exprs.reserve(components.size());
  for (const auto& c : components) exprs.push_back(expr::parse(c, source->dim()));
  return std::make_shared<const SmoothMap>(std::move(name), std::move(source), std::move(target),
                                           std::move(exprs));
}

MapPtr compose(const MapPtr& outer, const MapPtr& inner, std::string name) {
  if (!outer || !inner) throw ArgumentError("compose: null map");
  if (inner->target().dim() != outer->source().dim())
    throw ArgumentError("compose: inner target '" + inner->target().name() + "' has dimension " +
                        std::to_string(inner->target().dim()) + " but outer source '" +
                        outer->source().name() + "' has dimension " +
                        std::to_string(outer->source().dim()));
  std::shared_ptr<SmoothMap> map(new SmoothMap());
  map->name_ = name.empty() ? outer->name() + "∘" + inner->name() : std::move(name);
  map->source_ = inner->source_ptr();
  map->target_ = outer->target_ptr();
  map->outer_ = outer;
  map->inner_ = inner;
  return map;
}

MapJet map_jet(const SmoothMap& map, std::span<const double> point) {
  const std::size_t m = map.source().dim();
  const std::size_t n = map.target().dim();
  const auto mi = static_cast<Eigen::Index>(m), ni = static_cast<Eigen::Index>(n);

  const auto image = map.image(point);

  auto fn = [&map](std::span<const HyperDual> x) { return map.evaluate(x); };
  const auto jets = evaluate_jet2_components(fn, point);

  MapJet jet;
  jet.point = Eigen::Map<const Eigen::VectorXd>(point.data(), mi);
  jet.image = Eigen::Map<const Eigen::VectorXd>(image.data(), ni);
  jet.du.resize(ni, mi);
  jet.ddu.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    jet.du.row(static_cast<Eigen::Index>(i)) = jets[i].grad.transpose();
    jet.ddu[i] = jets[i].hess;
  }

  jet.source_metric = metric_jet(map.source(), point);
  jet.target_metric = metric_jet(map.target(), image);

  const auto& gs = jet.source_metric;
  const auto& gt = jet.target_metric;
  jet.pullback = jet.du.transpose() * gt.g * jet.du;
  jet.pullback = 0.5 * (jet.pullback + jet.pullback.transpose()).eval();
  jet.P = gs.g_inv * jet.pullback;

  jet.second_fund.assign(n, Eigen::MatrixXd::Zero(mi, mi));
  for (std::size_t i = 0; i < n; ++i) {
    auto& b = jet.second_fund[i];
    const auto ii = static_cast<Eigen::Index>(i);
    for (Eigen::Index a = 0; a < mi; ++a)
      for (Eigen::Index c = a; c < mi; ++c) {
        double v = jet.ddu[i](a, c);
        for (Eigen::Index k = 0; k < mi; ++k)
          v -= gs.christoffel[static_cast<std::size_t>(k)](a, c) * jet.du(ii, k);
        for (Eigen::Index j = 0; j < ni; ++j)
          for (Eigen::Index l = 0; l < ni; ++l)
            v += gt.christoffel[i](j, l) * jet.du(j, a) * jet.du(l, c);
        b(a, c) = v;
        b(c, a) = v;
      }
  }
  return jet;
}

ChainRuleSides chain_rule_sides(const MapPtr& f, const MapPtr& u, std::span<const double> point) {
  const auto composite = compose(f, u);
  const MapJet ju = map_jet(*u, point);
  const std::vector<double> y(ju.image.data(), ju.image.data() + ju.image.size());
  const MapJet jf = map_jet(*f, y);
  const MapJet jc = map_jet(*composite, point);

  const Eigen::Index m = ju.du.cols();
  const Eigen::Index p = jf.du.rows();

  ChainRuleSides sides;
  sides.rhs = jc.second_fund;
  sides.lhs.assign(static_cast<std::size_t>(p), Eigen::MatrixXd::Zero(m, m));
  for (Eigen::Index a = 0; a < p; ++a) {
    const auto& hess_f = jf.second_fund[static_cast<std::size_t>(a)];
    Eigen::MatrixXd v = ju.du.transpose() * hess_f * ju.du;
    for (Eigen::Index j = 0; j < jf.du.cols(); ++j)
      v += jf.du(a, j) * ju.second_fund[static_cast<std::size_t>(j)];
    sides.lhs[static_cast<std::size_t>(a)] = v;
  }
  return sides;
}

ResidualReport verify_chain_rule(const MapPtr& f, const MapPtr& u, std::span<const double> point) {
  const auto sides = chain_rule_sides(f, u, point);
  ResidualReport report;
  report.identity_name = "chain_rule";
  PointRecord rec;
  rec.point.assign(point.begin(), point.end());
  rec.image = u->image(point);
  double worst = 0.0;
  for (std::size_t a = 0; a < sides.lhs.size(); ++a) {
    const auto& l = sides.lhs[a];
    const auto& r = sides.rhs[a];
    for (Eigen::Index i = 0; i < l.rows(); ++i)
      for (Eigen::Index j = 0; j < l.cols(); ++j) {
        rec.lhs.push_back(l(i, j));
        rec.rhs.push_back(r(i, j));
        worst = std::max(worst, std::abs(l(i, j) - r(i, j)));
      }
  }
  rec.residual = worst;
  report.add(std::move(rec));
  report.finalize(1e-8);
  return report;
}

} // namespace symphonic
