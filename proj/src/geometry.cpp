#include "symphonic/geometry.hpp"

#include <utility>

#include "symphonic/autodiff.hpp"

namespace symphonic {

namespace {

Box default_sampling_box(const Box& domain) {
  std::vector<Interval> sides;
  sides.reserve(domain.dim());
  for (const auto& s : domain.sides()) {
    if (s.bounded()) {
      sides.push_back(s);
    } else {
      Interval t{0.25, 1.25};
      if (s.lo > t.lo && s.lo < t.hi) t = {s.lo, s.lo + 1.0};
      if (s.hi > t.lo && s.hi < t.hi) t = {s.hi - 1.0, s.hi};
      sides.push_back(t);
    }
  }
  return Box(std::move(sides));
}

} // namespace

ChartManifold::ChartManifold(std::string name, Box domain,
                             std::vector<std::vector<expr::Expression>> metric,
                             std::optional<Box> sampling_box)
    : name_(std::move(name)), dim_(domain.dim()), domain_(std::move(domain)) {
  if (dim_ == 0) throw ArgumentError("manifold '" + name_ + "' must have positive dimension");
  if (domain_.empty()) throw ArgumentError("manifold '" + name_ + "' has an empty domain");
  if (metric.size() != dim_)
    throw ArgumentError("manifold '" + name_ + "': metric must be " + std::to_string(dim_) + "x" +
                        std::to_string(dim_));
  for (std::size_t a = 0; a < dim_; ++a) {
    if (metric[a].size() != dim_)
      throw ArgumentError("manifold '" + name_ + "': metric row " + std::to_string(a + 1) +
                          " has wrong length");
  }
  constant_metric_ = true;
  for (std::size_t a = 0; a < dim_; ++a) {
    for (std::size_t b = a; b < dim_; ++b) {
      const auto& e = metric[a][b];
      if (e.arity() != dim_)
        throw ArgumentError("manifold '" + name_ + "': metric component arity mismatch");
      if (!expr::structurally_equal(e.root(), metric[b][a].root()))
        throw ArgumentError("manifold '" + name_ + "': metric is not symmetric at (" +
                            std::to_string(a + 1) + "," + std::to_string(b + 1) + ")");
      if (expr::variables_used(e.root()) != 0) constant_metric_ = false;
      upper_.push_back(e);
    }
  }
  sampling_box_ = sampling_box ? std::move(*sampling_box) : default_sampling_box(domain_);
  if (sampling_box_.dim() != dim_ || sampling_box_.empty())
    throw ArgumentError("manifold '" + name_ + "': bad sampling box");
  for (const auto& s : sampling_box_.sides())
    if (!s.bounded()) throw ArgumentError("manifold '" + name_ + "': sampling box must be finite");
}

ChartManifold ChartManifold::euclidean(std::size_t dim, std::string name, std::optional<Box> domain,
                                       std::optional<Box> sampling_box) {
  std::vector<std::vector<expr::Expression>> g(dim);
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b) g[a].push_back(expr::Expression::constant(a == b ? 1.0 : 0.0, dim));
  if (name.empty()) name = "R" + std::to_string(dim);
  return ChartManifold(std::move(name), domain ? std::move(*domain) : Box::unbounded(dim),
                       std::move(g), std::move(sampling_box));
}

ChartManifold ChartManifold::restricted(Box domain, std::string name,
                                        std::optional<Box> sampling_box) const {
  std::vector<std::vector<expr::Expression>> g(dim_);
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = 0; b < dim_; ++b) g[a].push_back(metric_component(a, b));
  return ChartManifold(std::move(name), std::move(domain), std::move(g), std::move(sampling_box));
}

const expr::Expression& ChartManifold::metric_component(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  // offset of row a in the packed upper triangle
  const std::size_t row = a * dim_ - a * (a - 1) / 2;
  return upper_[row + (b - a)];
}

std::vector<Eigen::MatrixXd> christoffel_symbols(const Eigen::MatrixXd& g_inv,
                                                 const std::vector<Eigen::MatrixXd>& dg) {
  const Eigen::Index n = g_inv.rows();
  std::vector<Eigen::MatrixXd> gamma(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, n));
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = a; b < n; ++b) {
        double s = 0.0;
        for (Eigen::Index d = 0; d < n; ++d) {
          s += g_inv(c, d) * (dg[static_cast<std::size_t>(a)](d, b) +
                              dg[static_cast<std::size_t>(b)](a, d) -
                              dg[static_cast<std::size_t>(d)](a, b));
        }
        gamma[static_cast<std::size_t>(c)](a, b) = 0.5 * s;
        gamma[static_cast<std::size_t>(c)](b, a) = 0.5 * s;
      }
  return gamma;
}

MetricJet metric_jet(const ChartManifold& manifold, std::span<const double> point) {
  require_inside(manifold.domain(), point, "metric_jet on '" + manifold.name() + "'");
  const std::size_t n = manifold.dim();
  const auto ni = static_cast<Eigen::Index>(n);

  MetricJet jet;
  jet.point = Eigen::Map<const Eigen::VectorXd>(point.data(), ni);
  jet.dg.assign(n, Eigen::MatrixXd::Zero(ni, ni));

  if (manifold.constant_metric()) {
    jet.g = manifold.metric_at(point);
  } else {
    auto components = [&](std::span<const Dual> x) {
      std::vector<Dual> out;
      out.reserve(n * n);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) out.push_back(manifold.metric_component(a, b).evaluate(x));
      return out;
    };
    const auto jets = evaluate_jet1_components(components, point);
    jet.g.resize(ni, ni);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const auto& j = jets[a * n + b];
        jet.g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = j.value;
        for (std::size_t c = 0; c < n; ++c)
          jet.dg[c](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
              j.grad(static_cast<Eigen::Index>(c));
      }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(jet.g);
  if (llt.info() != Eigen::Success || !jet.g.allFinite())
    throw GeometryError("metric of '" + manifold.name() + "' is not positive definite at " +
                        format_point(point));
  jet.g_inv = llt.solve(Eigen::MatrixXd::Identity(ni, ni));
  jet.g_inv = 0.5 * (jet.g_inv + jet.g_inv.transpose()).eval();
  jet.christoffel = christoffel_symbols(jet.g_inv, jet.dg);
  return jet;
}

Eigen::MatrixXd orthonormal_frame(const ChartManifold& manifold, std::span<const double> point,
                                  const Eigen::MatrixXd* rotation) {
  require_inside(manifold.domain(), point, "orthonormal_frame on '" + manifold.name() + "'");
  const Eigen::MatrixXd g = manifold.metric_at(point);
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw GeometryError("metric of '" + manifold.name() + "' is not positive definite at " +
                        format_point(point));
  const Eigen::MatrixXd l = llt.matrixL();
  Eigen::MatrixXd frame =
      l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(g.rows(), g.cols())).transpose();
  if (rotation) {
    if (rotation->rows() != g.rows() || rotation->cols() != g.cols())
      throw ArgumentError("orthonormal_frame: rotation has wrong shape");
    frame = frame * (*rotation);
  }
  return frame;
}

} // namespace symphonic
