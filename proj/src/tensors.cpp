#include "symphonic/tensors.hpp"

#include <cmath>

namespace symphonic {

const char* sigma_kind_name(SigmaKind kind) {
  switch (kind) {
  case SigmaKind::sigma_p: return "sigma";
  case SigmaKind::sigma_m: return "sigma_m";
  case SigmaKind::sigma_T: return "sigma_T";
  case SigmaKind::sigma_S: return "sigma_S";
  case SigmaKind::sigma_T_m: return "sigma_T_m";
  case SigmaKind::sigma_S_m: return "sigma_S_m";
  }
  return "?";
}

namespace {

void validate(const SigmaSpec& spec) {
  const bool powered = spec.kind == SigmaKind::sigma_m || spec.kind == SigmaKind::sigma_T_m ||
                       spec.kind == SigmaKind::sigma_S_m;
  if (powered && spec.m < 2)
    throw ArgumentError("power order m must be >= 2, got " + std::to_string(spec.m));
  if ((spec.kind == SigmaKind::sigma_T_m || spec.kind == SigmaKind::sigma_S_m) && !(spec.p >= 1.0))
    throw ArgumentError("exponent p must be >= 1");
}

Mat<double> as_mat(const Eigen::MatrixXd& m) { return m; }

} // namespace

TensorField1FormValued::TensorField1FormValued(MapPtr map, SigmaSpec spec)
    : map_(std::move(map)), spec_(spec) {
  if (!map_) throw ArgumentError("tensor field without a map");
  validate(spec_);
}

Eigen::MatrixXd TensorField1FormValued::components(std::span<const double> point) const {
  return sigma_components(spec_, map_jet(*map_, point));
}

Eigen::MatrixXd sigma_components(const SigmaSpec& spec, const MapJet& jet) {
  validate(spec);
  return sigma_from<double>(spec, as_mat(jet.du), as_mat(jet.P));
}

Eigen::MatrixXd sigma(const SmoothMap& map, std::span<const double> point) {
  return sigma_components(SigmaSpec::plain(), map_jet(map, point));
}
Eigen::MatrixXd sigma_m(const SmoothMap& map, int m, std::span<const double> point) {
  return sigma_components(SigmaSpec::power(m), map_jet(map, point));
}
Eigen::MatrixXd sigma_T(const SmoothMap& map, std::span<const double> point) {
  return sigma_components(SigmaSpec::trace_T(), map_jet(map, point));
}
Eigen::MatrixXd sigma_S(const SmoothMap& map, std::span<const double> point) {
  return sigma_components(SigmaSpec::trace_S(), map_jet(map, point));
}
Eigen::MatrixXd sigma_T_m(const SmoothMap& map, int m, double p, std::span<const double> point) {
  return sigma_components(SigmaSpec::trace_T_m(m, p), map_jet(map, point));
}
Eigen::MatrixXd sigma_S_m(const SmoothMap& map, int m, double p, std::span<const double> point) {
  return sigma_components(SigmaSpec::trace_S_m(m, p), map_jet(map, point));
}

double EnergyDensities::e_m(int m) const {
  if (m < 1) throw ArgumentError("e_m needs m >= 1");
  return matrix_power<double>(P, m).trace();
}

EnergyDensities energy_densities(const SmoothMap& map, std::span<const double> point) {
  const MapJet jet = map_jet(map, point);
  EnergyDensities e;
  e.P = jet.P;
  e.e_du = jet.P.trace();
  e.e_pullback = (jet.P * jet.P).trace();
  return e;
}

namespace detail {

DualGeometry dual_geometry(const MapJet& jet, Eigen::Index a) {
  const Eigen::Index n = jet.du.rows(), m = jet.du.cols();
  const auto ua = static_cast<std::size_t>(a);
  DualGeometry geo;
  geo.du.resize(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index b = 0; b < m; ++b)
      geo.du(i, b) = Dual(jet.du(i, b), jet.ddu[static_cast<std::size_t>(i)](b, a));

  const auto& gs = jet.source_metric;
  geo.g.resize(m, m);
  for (Eigen::Index b = 0; b < m; ++b)
    for (Eigen::Index c = 0; c < m; ++c) geo.g(b, c) = Dual(gs.g(b, c), gs.dg[ua](b, c));

  const auto& gt = jet.target_metric;
  geo.h.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double d = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) d += gt.dg[static_cast<std::size_t>(k)](i, j) * jet.du(k, a);
      geo.h(i, j) = Dual(gt.g(i, j), d);
    }
  return geo;
}

} // namespace detail

namespace {

/// Covariant derivative of a tensor field given its components and the
/// coordinate derivatives d_a sigma^i_b stored as partial[a](i, b).
std::vector<Eigen::MatrixXd> covariant_from_partials(const MapJet& jet, const Eigen::MatrixXd& s,
                                                     const std::vector<Eigen::MatrixXd>& partial) {
  const Eigen::Index n = jet.du.rows(), m = jet.du.cols();
  const auto& gam = jet.source_metric.christoffel;
  const auto& tgam = jet.target_metric.christoffel;
  std::vector<Eigen::MatrixXd> nabla(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(m, m));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& out = nabla[static_cast<std::size_t>(i)];
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) {
        double v = partial[static_cast<std::size_t>(a)](i, b);
        for (Eigen::Index c = 0; c < m; ++c) v -= gam[static_cast<std::size_t>(c)](a, b) * s(i, c);
        for (Eigen::Index j = 0; j < n; ++j)
          for (Eigen::Index k = 0; k < n; ++k)
            v += tgam[static_cast<std::size_t>(i)](j, k) * jet.du(j, a) * s(k, b);
        out(a, b) = v;
      }
  }
  return nabla;
}

struct PipelinePass {
  Eigen::MatrixXd sigma_value;
  Eigen::MatrixXd sigma_partial;   // d_a sigma
  double w2_value = 0.0;           // squared weight
  double w2_partial = 0.0;         // d_a w^2
  Eigen::MatrixXd weighted_partial;  // d_a (w^{p-2} sigma), when requested
};

double weight_power(double w2, double p) {
  if (p == 2.0) return 1.0;
  return std::pow(w2, 0.5 * (p - 2.0));
}

PipelinePass run_pass(const MapJet& jet, const SigmaSpec& spec, const WeightRule* rule, double p,
                      Eigen::Index a) {
  const auto geo = detail::dual_geometry(jet, a);
  const Mat<Dual> P = pullback_endomorphism(geo.du, geo.g, geo.h);
  const Mat<Dual> s = sigma_from(spec, geo.du, P);

  PipelinePass pass;
  pass.sigma_value = s.unaryExpr([](const Dual& d) { return d.v; });
  pass.sigma_partial = s.unaryExpr([](const Dual& d) { return d.d; });
  if (rule) {
    const Dual w2 = rule->squared(P);
    pass.w2_value = w2.v;
    pass.w2_partial = w2.d;
    if (w2.v > 0.0) {
      const Dual weight = p == 2.0 ? Dual(1.0) : pow(w2, 0.5 * (p - 2.0));
      const Mat<Dual> ws = s * weight;
      pass.weighted_partial = ws.unaryExpr([](const Dual& d) { return d.d; });
    }
  }
  return pass;
}

} // namespace

Eigen::VectorXd trace_divergence(const Eigen::MatrixXd& g_inv,
                                 const std::vector<Eigen::MatrixXd>& nabla) {
  Eigen::VectorXd div(static_cast<Eigen::Index>(nabla.size()));
  for (std::size_t i = 0; i < nabla.size(); ++i) div(static_cast<Eigen::Index>(i)) = (g_inv.array() * nabla[i].array()).sum();
  return div;
}

CovariantDerivative covariant_derivative(const TensorField1FormValued& tensor,
                                         std::span<const double> point) {
  CovariantDerivative cd;
  cd.jet = map_jet(tensor.map(), point);
  const Eigen::Index m = cd.jet.du.cols();
  std::vector<Eigen::MatrixXd> partial(static_cast<std::size_t>(m));
  for (Eigen::Index a = 0; a < m; ++a) {
    auto pass = run_pass(cd.jet, tensor.spec(), nullptr, 2.0, a);
    if (a == 0) cd.sigma = pass.sigma_value;
    partial[static_cast<std::size_t>(a)] = std::move(pass.sigma_partial);
  }
  cd.nabla = covariant_from_partials(cd.jet, cd.sigma, partial);
  return cd;
}

DivergenceResult divergence(const TensorField1FormValued& tensor, std::span<const double> point) {
  const auto cd = covariant_derivative(tensor, point);
  DivergenceResult r;
  r.point = cd.jet.point;
  r.image = cd.jet.image;
  r.div = trace_divergence(cd.jet.source_metric.g_inv, cd.nabla);
  r.weight_value = 1.0;
  r.plain_term = r.div;
  r.gradient_term = Eigen::VectorXd::Zero(r.div.size());
  return r;
}

DivergenceResult weighted_divergence(const TensorField1FormValued& tensor, const WeightRule& rule,
                                     double p, std::span<const double> point) {
  if (!(p >= 1.0)) throw ArgumentError("weighted_divergence: p must be >= 1");
  if (rule.kind == WeightRule::Kind::dm_norm && rule.m < 2)
    throw ArgumentError("weighted_divergence: m must be >= 2");

  const MapJet jet = map_jet(tensor.map(), point);
  const Eigen::Index n = jet.du.rows(), m = jet.du.cols();
  const auto um = static_cast<std::size_t>(m);

  std::vector<Eigen::MatrixXd> sigma_partial(um), weighted_partial(um);
  Eigen::VectorXd w2_grad(m);
  Eigen::MatrixXd s;
  double w2 = 0.0;
  for (Eigen::Index a = 0; a < m; ++a) {
    auto pass = run_pass(jet, tensor.spec(), &rule, p, a);
    if (a == 0) {
      s = pass.sigma_value;
      w2 = pass.w2_value;
    }
    sigma_partial[static_cast<std::size_t>(a)] = std::move(pass.sigma_partial);
    weighted_partial[static_cast<std::size_t>(a)] = std::move(pass.weighted_partial);
    w2_grad(a) = pass.w2_partial;
  }

  DivergenceResult r;
  r.point = jet.point;
  r.image = jet.image;
  const Eigen::MatrixXd& g_inv = jet.source_metric.g_inv;
  const Eigen::VectorXd plain_div = trace_divergence(g_inv, covariant_from_partials(jet, s, sigma_partial));

  if (!(w2 > 0.0)) {
    if (p < 2.0)
      throw SingularWeightError("weight vanishes at " + format_point(point) + " with p = " +
                                std::to_string(p) + " < 2");
    // Continuous extension: w^{p-2} -> 0 (or 1 at p = 2) and the gradient
    // term drops out because w^2 is minimal here.
    r.weight_value = p == 2.0 ? 1.0 : 0.0;
    r.plain_term = r.weight_value * plain_div;
    r.gradient_term = Eigen::VectorXd::Zero(n);
    r.div = r.plain_term;
    return r;
  }

  r.weight_value = weight_power(w2, p);
  r.plain_term = r.weight_value * plain_div;

  // ((p-2)/2) w^{p-4} g^{ab} d_a(w^2) sigma_b
  const double coef = p == 2.0 ? 0.0 : 0.5 * (p - 2.0) * std::pow(w2, 0.5 * (p - 4.0));
  const Eigen::VectorXd raised = g_inv * w2_grad;
  r.gradient_term = coef * (s * raised);

  if (p == 2.0) {
    r.div = r.plain_term;
  } else {
    const Eigen::MatrixXd ws = r.weight_value * s;
    r.div = trace_divergence(g_inv, covariant_from_partials(jet, ws, weighted_partial));
  }
  return r;
}

} // namespace symphonic
