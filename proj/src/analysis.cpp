#include "symphonic/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symphonic/errors.hpp"

namespace symphonic {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

} // namespace

ConformalityAt conformality_at(const MapJet& jet) {
  const Eigen::MatrixXd& h = jet.target_metric.g;
  const Eigen::MatrixXd& h_inv = jet.target_metric.g_inv;
  ConformalityAt c;
  c.co_metric = jet.du * jet.source_metric.g_inv * jet.du.transpose();
  c.lambda_sq = (c.co_metric * h).trace() / static_cast<double>(h.rows());
  c.residual = max_abs(c.co_metric - c.lambda_sq * h_inv);
  return c;
}

ConformalityAt conformality_at(const SmoothMap& map, std::span<const double> point) {
  return conformality_at(map_jet(map, point));
}

ConformalityReport horizontal_conformality(const SmoothMap& map, const PointSet& samples,
                                           double tol) {
  if (map.source().dim() < map.target().dim())
    throw ArgumentError("horizontal_conformality: source '" + map.source().name() +
                        "' has smaller dimension than target '" + map.target().name() + "'");
  ConformalityReport report;
  report.map_name = map.name();
  report.tolerance = tol;
  report.per_point.resize(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto c = conformality_at(map, samples[i]);
    report.per_point[i] = {samples[i], c.lambda_sq, c.residual};
  });

  if (report.per_point.empty()) {
    report.warnings.emplace_back("no sample point could be evaluated");
    return report;
  }
  report.min_lambda = std::numeric_limits<double>::infinity();
  report.max_lambda = -report.min_lambda;
  for (const auto& p : report.per_point) {
    const double lambda = std::sqrt(std::max(p.lambda_sq, 0.0));
    report.min_lambda = std::min(report.min_lambda, lambda);
    report.max_lambda = std::max(report.max_lambda, lambda);
    report.max_residual = std::max(report.max_residual, p.residual);
  }
  report.lambda_constant = report.max_lambda - report.min_lambda < tol;
  report.verdict = report.max_residual < tol;
  return report;
}

ResidualReport is_p_symphonic(const MapPtr& map, double p, const PointSet& samples, double tol) {
  if (!(p >= 1.0)) throw ArgumentError("is_p_symphonic: p must be >= 1");
  const TensorField1FormValued tensor(map, SigmaSpec::plain());
  const auto rule = WeightRule::pullback();
  auto report = detail::collect_points("p_symphonic", samples, tol, [&](std::size_t, std::span<const double> x) {
    const auto d = weighted_divergence(tensor, rule, p, x);
    PointRecord rec;
    rec.point.assign(x.begin(), x.end());
    rec.image = to_std(d.image);
    rec.lhs = to_std(d.div);
    rec.rhs.assign(rec.lhs.size(), 0.0);
    rec.residual = d.div.norm();
    return rec;
  });
  report.annotations.push_back("map " + map->name() + ", p = " + fmt(p));
  return report;
}

ResidualReport is_totally_geodesic(const SmoothMap& map, const PointSet& samples, double tol) {
  auto report = detail::collect_points("totally_geodesic", samples, tol, [&](std::size_t, std::span<const double> x) {
    const MapJet jet = map_jet(map, x);
    PointRecord rec;
    rec.point.assign(x.begin(), x.end());
    rec.image = to_std(jet.image);
    double worst = 0.0;
    for (const auto& b : jet.second_fund) {
      for (Eigen::Index i = 0; i < b.size(); ++i) rec.lhs.push_back(b.data()[i]);
      worst = std::max(worst, max_abs(b));
    }
    rec.rhs.assign(rec.lhs.size(), 0.0);
    rec.residual = worst;
    return rec;
  });
  report.annotations.push_back("map " + map.name());
  return report;
}

ResidualReport is_conformal_function(const SmoothMap& f, const PointSet& samples, double tol) {
  if (f.target().dim() != 1)
    throw ArgumentError("is_conformal_function: '" + f.name() + "' is not real-valued");
  const auto dim = static_cast<double>(f.source().dim());
  auto report = detail::collect_points("conformal_function", samples, tol, [&](std::size_t, std::span<const double> x) {
    const MapJet jet = map_jet(f, x);
    const Eigen::VectorXd df = jet.du.row(0).transpose();
    const Eigen::MatrixXd& g = jet.source_metric.g;
    const double lambda = df.dot(jet.source_metric.g_inv * df) / dim;
    const Eigen::MatrixXd defect = df * df.transpose() - lambda * g;
    PointRecord rec;
    rec.point.assign(x.begin(), x.end());
    rec.image = to_std(jet.image);
    rec.lhs = {lambda};
    rec.rhs = {lambda};
    rec.residual = max_abs(defect);
    return rec;
  });
  if (f.source().dim() >= 2)
    report.annotations.push_back(
        "f_i f_j has rank at most 1 while g has rank " + std::to_string(f.source().dim()) +
        ", so the condition can only hold where df = 0");
  return report;
}

double prop2_constraint(const Jet2Data& jet, double p) {
  const Eigen::VectorXd& c = jet.C;
  if (jet.C2.rows() != c.size() || jet.C2.cols() != c.size())
    throw ArgumentError("prop2_constraint: C2 must be square of the size of C");
  // Every term factors through S3 = sum_i C_i^3 and Q = sum_{i,k} C_k C_i^2 C_ik.
  const double s3 = c.array().cube().sum();
  const double q = c.array().square().matrix().dot(jet.C2 * c);
  return 4.0 * (p - 2.0) * q * s3 + s3 * s3 * jet.C2.trace() + 2.0 * s3 * q;
}

std::vector<Jet2Data> probe_jets(std::size_t target_dim) {
  if (target_dim < 1) throw ArgumentError("probe_jets: target_dim must be >= 1");
  const auto n = static_cast<Eigen::Index>(target_dim);
  std::vector<Jet2Data> probes;
  for (Eigen::Index k = 0; k < n; ++k)
    probes.push_back({Eigen::VectorXd::Unit(n, k), Eigen::MatrixXd::Zero(n, n)});
  return probes;
}

MapPtr coordinate_probe(const ManifoldPtr& target, std::size_t k) {
  if (k >= target->dim()) throw ArgumentError("coordinate_probe: index out of range");
  static const auto line = std::make_shared<const ChartManifold>(ChartManifold::euclidean(1, "R"));
  return make_map("y" + std::to_string(k + 1), target, line, {"x" + std::to_string(k + 1)});
}

ResidualReport morphism_probe_test(const MapPtr& u, double p, const PointSet& samples, double tol) {
  if (!(p >= 1.0)) throw ArgumentError("morphism_probe_test: p must be >= 1");
  const std::size_t n = u->target().dim();
  std::vector<MapPtr> probes;
  std::vector<TensorField1FormValued> composite, own;
  for (std::size_t k = 0; k < n; ++k) {
    probes.push_back(coordinate_probe(u->target_ptr(), k));
    composite.emplace_back(compose(probes[k], u), SigmaSpec::plain());
    own.emplace_back(probes[k], SigmaSpec::plain());
  }
  const auto rule = WeightRule::pullback();

  auto report = detail::collect_points("morphism_probe", samples, tol, [&](std::size_t, std::span<const double> x) {
    const MapJet ju = map_jet(*u, x);
    const double scale = std::pow(conformality_at(ju).lambda_sq, p);
    PointRecord rec;
    rec.point.assign(x.begin(), x.end());
    rec.image = to_std(ju.image);
    double worst = 0.0;
    std::vector<double> residuals(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double lhs = weighted_divergence(composite[k], rule, p, x).div(0);
      const double base = scale * weighted_divergence(own[k], rule, p, rec.image).div(0);
      rec.lhs.push_back(lhs);
      rec.rhs.push_back(base);
      residuals[k] = std::abs(lhs - base);
      worst = std::max(worst, residuals[k]);
    }
    rec.residual = worst;
    return rec;
  });

  report.annotations.push_back(
      "necessary certificate only: coordinate probes y^k o u are checked, not every p-symphonic "
      "function");
  report.annotations.push_back("map " + u->name() + ", p = " + fmt(p) + ", " +
                               std::to_string(n) + " probe(s)");
  for (std::size_t k = 0; k < n; ++k) {
    double worst = 0.0;
    for (const auto& rec : report.per_point)
      worst = std::max(worst, std::abs(rec.lhs[k] - rec.rhs[k]));
    report.annotations.push_back("probe y" + std::to_string(k + 1) + ": max residual " + fmt(worst) +
                                 (worst < tol ? " (pass)" : " (fail)"));
  }
  if (!u->target().constant_metric())
    report.annotations.push_back("curved target: probe defects lambda^{2p} div(y^k) subtracted as baseline");
  return report;
}

// --- composition ingredients -------------------------------------------------

namespace {

/// nabla_{e_a} e_b in coordinates for the frame E = cholesky_frame(g), as
/// columns of out[a] (column b).
std::vector<Eigen::MatrixXd> frame_connection(const MetricJet& mj, const Eigen::MatrixXd& frame) {
  const Eigen::Index m = frame.rows();
  std::vector<Eigen::MatrixXd> dframe(static_cast<std::size_t>(m));
  for (Eigen::Index d = 0; d < m; ++d) {
    Mat<Dual> g(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        g(i, j) = Dual(mj.g(i, j), mj.dg[static_cast<std::size_t>(d)](i, j));
    dframe[static_cast<std::size_t>(d)] =
        cholesky_frame(g).unaryExpr([](const Dual& v) { return v.d; });
  }
  std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(m, m));
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      for (Eigen::Index c = 0; c < m; ++c) {
        double v = 0.0;
        for (Eigen::Index d = 0; d < m; ++d) {
          double inner = dframe[static_cast<std::size_t>(d)](c, b);
          for (Eigen::Index e = 0; e < m; ++e)
            inner += mj.christoffel[static_cast<std::size_t>(c)](d, e) * frame(e, b);
          v += frame(d, a) * inner;
        }
        out[static_cast<std::size_t>(a)](c, b) = v;
      }
  return out;
}

} // namespace

Theorem7Terms theorem7_ingredients(const MapPtr& f, const MapPtr& u, double p,
                                   std::span<const double> point) {
  if (!(p >= 1.0)) throw ArgumentError("theorem7_ingredients: p must be >= 1");
  const MapPtr F = compose(f, u);
  const MapJet ju = map_jet(*u, point);
  const std::vector<double> y = to_std(ju.image);
  const MapJet jf = map_jet(*f, y);
  const MapJet jF = map_jet(*F, point);

  const Eigen::Index m = ju.du.cols();
  const Eigen::Index nt = jF.du.rows();
  const Eigen::Index n = ju.du.rows();
  const auto um = static_cast<std::size_t>(m);
  const Eigen::MatrixXd& ht = jF.target_metric.g;
  auto ip = [&ht](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(ht * b); };

  const Eigen::MatrixXd E = orthonormal_frame(u->source(), point);
  const Eigen::MatrixXd A = jF.du * E;
  const Eigen::MatrixXd duE = ju.du * E;
  const auto nabla_e = frame_connection(ju.source_metric, E);

  // B[a][b] = df(nabla du(e_a, e_b)), D[a][b] = dF(nabla_{e_a} e_b), H[a][b] = nabla df(du e_a, du e_b)
  using Grid = std::vector<std::vector<Eigen::VectorXd>>;
  Grid B(um, std::vector<Eigen::VectorXd>(um)), D = B, H = B;
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) {
      Eigen::VectorXd sff(n);
      for (Eigen::Index j = 0; j < n; ++j)
        sff(j) = E.col(a).dot(ju.second_fund[static_cast<std::size_t>(j)] * E.col(b));
      Eigen::VectorXd hess(nt);
      for (Eigen::Index k = 0; k < nt; ++k)
        hess(k) = duE.col(a).dot(jf.second_fund[static_cast<std::size_t>(k)] * duE.col(b));
      const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
      B[ua][ub] = jf.du * sff;
      D[ua][ub] = jF.du * nabla_e[ua].col(b);
      H[ua][ub] = hess;
    }

  // Gram matrix <A_a, A_b> and S_a = sum_b <A_a, A_b> A_b.
  const Eigen::MatrixXd gram = A.transpose() * ht * A;
  const Eigen::MatrixXd S = A * gram;

  Theorem7Terms t;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(nt);
  t.I_without_tension = zero;
  t.tension_term = zero;
  t.II_terms.assign(6, zero);
  t.III_terms.assign(3, zero);
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    for (Eigen::Index b = 0; b < m; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      t.I_without_tension += ip(A.col(b), B[ub][ua]) * A.col(a) + gram(b, a) * B[ub][ua];
      t.tension_term += ip(B[ub][ub], A.col(a)) * A.col(a);
      t.III_terms[0] += ip(S.col(b), H[ua][ub]) * S.col(a);
      t.III_terms[1] += ip(S.col(b), B[ua][ub]) * S.col(a);
      t.III_terms[2] += ip(S.col(b), D[ua][ub]) * S.col(a);
      for (Eigen::Index c = 0; c < m; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        t.II_terms[0] += ip(B[ua][ub], A.col(c)) * gram(c, b) * S.col(a);
        t.II_terms[1] += ip(D[ua][ub], A.col(c)) * gram(c, b) * S.col(a);
        t.II_terms[2] += ip(A.col(b), B[ua][uc]) * gram(c, b) * S.col(a);
        t.II_terms[3] += ip(A.col(b), D[ua][uc]) * gram(c, b) * S.col(a);
        t.II_terms[4] += gram(b, c) * ip(B[ua][uc], A.col(b)) * S.col(a);
        t.II_terms[5] += gram(b, c) * ip(D[ua][uc], A.col(b)) * S.col(a);
      }
    }
  }
  t.I = t.I_without_tension + t.tension_term;
  t.II = zero;
  for (const auto& v : t.II_terms) t.II += v;
  t.III = zero;
  for (const auto& v : t.III_terms) t.III += v;
  t.du_part = t.II_terms[0] + t.II_terms[2] + t.II_terms[4] + t.III_terms[1];
  t.frame_part = t.II_terms[1] + t.II_terms[3] + t.II_terms[5] + t.III_terms[2];

  const auto rule = WeightRule::pullback();
  t.lhs = weighted_divergence(TensorField1FormValued(F, SigmaSpec::plain()), rule, p, point).div;
  t.lambda_sq = conformality_at(ju).lambda_sq;
  t.main_term = std::pow(t.lambda_sq, p) *
                weighted_divergence(TensorField1FormValued(f, SigmaSpec::plain()), rule, p, y).div;

  t.weight_sq = (gram.array() * gram.array()).sum();
  double plain_weight = 0.0, gradient_weight = 0.0;
  if (t.weight_sq > 0.0) {
    plain_weight = p == 2.0 ? 1.0 : std::pow(t.weight_sq, 0.5 * (p - 2.0));
    gradient_weight = p == 2.0 ? 0.0 : 0.5 * (p - 2.0) * std::pow(t.weight_sq, 0.5 * (p - 4.0));
  } else {
    plain_weight = p == 2.0 ? 1.0 : 0.0;
  }
  t.assembled = t.main_term + plain_weight * t.I + gradient_weight * t.du_part;
  t.decomposition_residual = (t.lhs - t.assembled).norm();
  return t;
}

} // namespace symphonic
