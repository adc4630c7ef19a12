#include "symphonic/identities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "symphonic/errors.hpp"

namespace symphonic {

namespace {

constexpr std::array<std::pair<IdentityKind, const char*>, 7> kNames{{
    {IdentityKind::thm1_unweighted, "thm1_unweighted"},
    {IdentityKind::thm1_weighted, "thm1_weighted"},
    {IdentityKind::lemma3, "lemma3"},
    {IdentityKind::thm6_m_version, "thm6_m_version"},
    {IdentityKind::sec3_T_theorem, "sec3_T_theorem"},
    {IdentityKind::sec3_T_lemma, "sec3_T_lemma"},
    {IdentityKind::sec3_S_variant, "sec3_S_variant"},
}};

constexpr double hypothesis_tol = 1e-7;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

/// Pieces of one identity at one point: rhs = scale * main + correction.
struct Sides {
  Eigen::VectorXd lhs;
  Eigen::VectorXd main;
  Eigen::VectorXd correction;
  double scale = 1.0;
  std::vector<double> image;
};

using SidesFn = std::function<Sides(std::span<const double>)>;

struct Evaluated {
  ResidualReport report;
  std::vector<double> log_ratios;  // log(|lhs| / |main|), NaN where undefined
};

Evaluated evaluate(const std::string& name, const PointSet& samples, double tol, const SidesFn& fn) {
  Evaluated out;
  out.log_ratios.assign(samples.size(), std::numeric_limits<double>::quiet_NaN());
  out.report = detail::collect_points(name, samples, tol, [&](std::size_t i, std::span<const double> x) {
    const Sides s = fn(x);
    const Eigen::VectorXd rhs = s.scale * s.main + s.correction;
    PointRecord rec;
    rec.point.assign(x.begin(), x.end());
    rec.image = s.image;
    rec.lhs = to_std(s.lhs);
    rec.rhs = to_std(rhs);
    rec.residual = residual_norm(s.lhs, rhs);
    const double num = s.lhs.norm(), den = s.main.norm();
    if (num > 1e-300 && den > 1e-300) out.log_ratios[i] = std::log(num / den);
    return rec;
  });
  return out;
}

struct Pipeline {
  SigmaSpec spec;
  std::optional<WeightRule> rule;  // unweighted when empty
  double p = 2.0;
};

Eigen::VectorXd div_of(const MapPtr& map, const Pipeline& pl, std::span<const double> x) {
  const TensorField1FormValued tensor(map, pl.spec);
  return pl.rule ? weighted_divergence(tensor, *pl.rule, pl.p, x).div : divergence(tensor, x).div;
}

/// lhs from f o u at x, main from f at u(x), scale (lambda^2)^{exponent/2}.
SidesFn two_sided(const MapPtr& u, const MapPtr& f, Pipeline pl, double exponent) {
  const MapPtr F = compose(f, u);
  return [=](std::span<const double> x) {
    const MapJet ju = map_jet(*u, x);
    Sides s;
    s.image = to_std(ju.image);
    s.lhs = div_of(F, pl, x);
    s.main = div_of(f, pl, s.image);
    s.correction = Eigen::VectorXd::Zero(s.lhs.size());
    s.scale = std::pow(conformality_at(ju).lambda_sq, 0.5 * exponent);
    return s;
  };
}

/// Adds lambda_f^2 df(div of the u-tensor) to a two-sided identity.
SidesFn with_correction(const MapPtr& u, const MapPtr& f, Pipeline pl, double exponent) {
  auto base = two_sided(u, f, pl, exponent);
  return [=](std::span<const double> x) {
    Sides s = base(x);
    const MapJet jf = map_jet(*f, s.image);
    const double lambda_f_sq = conformality_at(jf).lambda_sq;
    s.correction = lambda_f_sq * (jf.du * div_of(u, pl, x));
    return s;
  };
}

void check_pair(const MapPtr& u, const MapPtr& f) {
  if (!u || !f) throw ArgumentError("identity needs both u and f");
  if (u->target().dim() != f->source().dim())
    throw ArgumentError("identity: target of '" + u->name() + "' and source of '" + f->name() +
                        "' differ in dimension");
}

std::string verdict_word(bool ok) { return ok ? "holds" : "violated"; }

void note_totally_geodesic(ResidualReport& report, const std::string& who, const SmoothMap& map,
                           const PointSet& samples) {
  const auto tg = is_totally_geodesic(map, samples, hypothesis_tol);
  report.annotations.push_back("hypothesis " + who + " totally geodesic: " + verdict_word(tg.verdict) +
                               " (max |nabla du| = " + fmt(tg.max_residual) + ")");
}

void note_conformal(ResidualReport& report, const std::string& who, const SmoothMap& map,
                    const PointSet& samples, bool need_constant) {
  if (map.source().dim() < map.target().dim()) {
    report.annotations.push_back("hypothesis " + who +
                                 " horizontally conformal: violated (source dimension below target)");
    return;
  }
  const auto hc = horizontal_conformality(map, samples, hypothesis_tol);
  std::string line = "hypothesis " + who + " horizontally conformal: " + verdict_word(hc.verdict) +
                     " (max residual " + fmt(hc.max_residual) + ", lambda in [" + fmt(hc.min_lambda) +
                     ", " + fmt(hc.max_lambda) + "])";
  if (need_constant)
    line += hc.lambda_constant ? ", dilation constant" : ", dilation not constant";
  report.annotations.push_back(line);
}

PointSet images_of(const SmoothMap& u, const PointSet& samples) {
  PointSet out;
  out.reserve(samples.size());
  for (const auto& x : samples) out.push_back(u.image(x));
  return out;
}

void note_charts(ResidualReport& report, const MapPtr& u, const MapPtr& f) {
  if (u->target_ptr() != f->source_ptr() && u->target().name() != f->source().name())
    report.warnings.push_back("target chart '" + u->target().name() + "' of u and source chart '" +
                              f->source().name() +
                              "' of f are identified by coordinates; their metrics may differ");
}

void note_thm1_hypotheses(ResidualReport& report, const MapPtr& u, const PointSet& samples) {
  note_totally_geodesic(report, "u", *u, samples);
  note_conformal(report, "u", *u, samples, true);
}

} // namespace

const char* identity_name(IdentityKind kind) {
  for (const auto& [k, n] : kNames)
    if (k == kind) return n;
  return "?";
}

std::optional<IdentityKind> identity_from_name(const std::string& name) {
  for (const auto& [k, n] : kNames)
    if (name == n) return k;
  return std::nullopt;
}

std::vector<std::string> identity_names() {
  std::vector<std::string> out;
  for (const auto& entry : kNames) out.emplace_back(entry.second);
  return out;
}

ResidualReport verify_thm1_unweighted(const MapPtr& u, const MapPtr& f, const PointSet& samples,
                                      double tol) {
  check_pair(u, f);
  auto out = evaluate("thm1_unweighted", samples, tol, two_sided(u, f, {SigmaSpec::plain(), {}, 2.0}, 4.0));
  note_thm1_hypotheses(out.report, u, samples);
  note_charts(out.report, u, f);
  return out.report;
}

ResidualReport verify_thm1_weighted(const MapPtr& u, const MapPtr& f, double p,
                                    const PointSet& samples, double tol) {
  check_pair(u, f);
  if (!(p >= 1.0)) throw ArgumentError("verify_thm1_weighted: p must be >= 1");
  auto out = evaluate("thm1_weighted", samples, tol,
                      two_sided(u, f, {SigmaSpec::plain(), WeightRule::pullback(), p}, 2.0 * p));
  note_thm1_hypotheses(out.report, u, samples);
  out.report.annotations.push_back("p = " + fmt(p) + ", rhs scaled by lambda^{2p}");
  note_charts(out.report, u, f);
  return out.report;
}

ResidualReport verify_lemma3(const MapPtr& u, const MapPtr& f, double p, const PointSet& samples,
                             double tol) {
  check_pair(u, f);
  if (!(p >= 1.0)) throw ArgumentError("verify_lemma3: p must be >= 1");
  auto out = evaluate("lemma3", samples, tol,
                      with_correction(u, f, {SigmaSpec::plain(), WeightRule::pullback(), p}, 2.0 * p));
  note_conformal(out.report, "u", *u, samples, false);
  note_conformal(out.report, "f", *f, images_of(*u, samples), false);
  note_charts(out.report, u, f);
  out.report.annotations.push_back("p = " + fmt(p) +
                                   ", rhs = lambda_f^2 df(div(|u*h|^{p-2} sigma_u)) + lambda^{2p} div(|f*h|^{p-2} sigma_f)");
  if (p != 2.0) {
    out.report.annotations.push_back(
        "the weight scales the first term by lambda_f^{2p-2}, which equals lambda_f^2 only at p = 2; "
        "expect a nonzero residual unless f is an isometry");
  }
  return out.report;
}

ResidualReport verify_thm6(const MapPtr& u, const MapPtr& f, double p, int m,
                           const PointSet& samples, double tol) {
  check_pair(u, f);
  if (!(p >= 1.0)) throw ArgumentError("verify_thm6: p must be >= 1");
  if (m < 2) throw ArgumentError("verify_thm6: m must be >= 2");
  auto out = evaluate("thm6_m_version", samples, tol,
                      two_sided(u, f, {SigmaSpec::power(m), WeightRule::dm(m), p}, m * p));
  note_thm1_hypotheses(out.report, u, samples);
  out.report.annotations.push_back("p = " + fmt(p) + ", m = " + std::to_string(m) +
                                   ", rhs scaled by lambda^{mp}");
  note_charts(out.report, u, f);
  return out.report;
}

ResidualReport verify_sec3_T(const MapPtr& u, const MapPtr& f, const PointSet& samples, double tol,
                             Sec3Variant variant, Sec3Form form) {
  check_pair(u, f);
  const SigmaSpec spec = variant == Sec3Variant::T ? SigmaSpec::trace_T() : SigmaSpec::trace_S();
  const std::string tensor_name = variant == Sec3Variant::T ? "sigma_T" : "sigma_S";
  const auto tg = is_totally_geodesic(*u, samples, hypothesis_tol);
  const bool lemma = form == Sec3Form::lemma || (form == Sec3Form::automatic && !tg.verdict);

  std::string name = variant == Sec3Variant::S ? "sec3_S_variant"
                     : lemma                  ? "sec3_T_lemma"
                                              : "sec3_T_theorem";
  const Pipeline pl{spec, {}, 2.0};
  auto out = evaluate(name, samples, tol, lemma ? with_correction(u, f, pl, 4.0) : two_sided(u, f, pl, 4.0));
  auto& r = out.report;
  r.annotations.push_back(std::string("form: ") + (lemma ? "lemma" : "theorem") + ", tensor " + tensor_name +
                          (form == Sec3Form::automatic ? " (chosen from the totally geodesic check on u)" : ""));
  r.annotations.push_back("hypothesis u totally geodesic: " + verdict_word(tg.verdict) +
                          " (max |nabla du| = " + fmt(tg.max_residual) + ")");
  note_conformal(r, "u", *u, samples, !lemma);
  const PointSet images = images_of(*u, samples);
  note_totally_geodesic(r, "f", *f, images);
  note_conformal(r, "f", *f, images, false);
  note_charts(r, u, f);
  if (u->source().dim() != f->source().dim())
    r.annotations.push_back("source dimensions differ, so the trace coefficients of the two sides differ");
  return r;
}

ResidualReport verify(const IdentityCase& c) {
  PointSet samples = c.samples;
  if (samples.empty()) {
    if (!c.u) throw ArgumentError("identity needs u");
    samples = sample_box(c.u->source().sampling_box(), c.sample_count, c.seed);
  }
  switch (c.kind) {
  case IdentityKind::thm1_unweighted: return verify_thm1_unweighted(c.u, c.f, samples, c.tol);
  case IdentityKind::thm1_weighted: return verify_thm1_weighted(c.u, c.f, c.p, samples, c.tol);
  case IdentityKind::lemma3: return verify_lemma3(c.u, c.f, c.p, samples, c.tol);
  case IdentityKind::thm6_m_version: return verify_thm6(c.u, c.f, c.p, c.m, samples, c.tol);
  case IdentityKind::sec3_T_theorem:
    return verify_sec3_T(c.u, c.f, samples, c.tol, Sec3Variant::T, Sec3Form::theorem);
  case IdentityKind::sec3_T_lemma:
    return verify_sec3_T(c.u, c.f, samples, c.tol, Sec3Variant::T, Sec3Form::lemma);
  case IdentityKind::sec3_S_variant:
    return verify_sec3_T(c.u, c.f, samples, c.tol, Sec3Variant::S, c.form);
  }
  throw ArgumentError("unknown identity");
}

double expected_exponent(IdentityKind kind, double p, int m) {
  switch (kind) {
  case IdentityKind::thm1_weighted: return 2.0 * p;
  case IdentityKind::thm6_m_version: return m * p;
  case IdentityKind::lemma3:
  case IdentityKind::sec3_T_lemma:
    throw ArgumentError(std::string(identity_name(kind)) + " has no single scaling exponent");
  default: return 4.0;
  }
}

SweepResult exponent_sweep(const IdentityCase& base, const MapFamily& family,
                           const std::vector<double>& lambdas) {
  if (!base.f) throw ArgumentError("exponent_sweep: f is required");
  const double expected = expected_exponent(base.kind, base.p, base.m);
  const std::set<double> distinct(lambdas.begin(), lambdas.end());
  if (distinct.size() < 2)
    throw ArgumentError("exponent_sweep: need at least two distinct lambdas");
  for (double l : lambdas)
    if (!(l > 0.0)) throw ArgumentError("exponent_sweep: lambdas must be positive");

  SweepResult result;
  result.identity_name = identity_name(base.kind);
  result.expected_exponent = expected;

  for (double lambda : lambdas) {
    const MapPtr u = family(lambda);
    check_pair(u, base.f);
    const PointSet samples = base.samples.empty()
                                 ? sample_box(u->source().sampling_box(), base.sample_count, base.seed)
                                 : base.samples;
    Pipeline pl;
    switch (base.kind) {
    case IdentityKind::thm1_unweighted: pl = {SigmaSpec::plain(), {}, 2.0}; break;
    case IdentityKind::thm1_weighted: pl = {SigmaSpec::plain(), WeightRule::pullback(), base.p}; break;
    case IdentityKind::thm6_m_version: pl = {SigmaSpec::power(base.m), WeightRule::dm(base.m), base.p}; break;
    case IdentityKind::sec3_T_theorem: pl = {SigmaSpec::trace_T(), {}, 2.0}; break;
    case IdentityKind::sec3_S_variant: pl = {SigmaSpec::trace_S(), {}, 2.0}; break;
    default: break;
    }
    auto ev = evaluate(result.identity_name, samples, base.tol, two_sided(u, base.f, pl, expected));
    double sum = 0.0;
    std::size_t count = 0;
    for (double r : ev.log_ratios)
      if (std::isfinite(r)) {
        sum += r;
        ++count;
      }
    if (count == 0)
      throw ArgumentError("exponent_sweep: both sides vanish at every sample for lambda = " + fmt(lambda));
    SweepPoint sp{lambda, sum / static_cast<double>(count), std::move(ev.report)};
    sp.report.annotations.push_back("lambda = " + fmt(lambda) + ", u = " + u->name());
    result.per_lambda.push_back(std::move(sp));
  }

  // Least squares through (log lambda, mean log ratio).
  double sx = 0.0, sy = 0.0;
  for (const auto& sp : result.per_lambda) {
    sx += std::log(sp.lambda);
    sy += sp.mean_log_ratio;
  }
  const double n = static_cast<double>(result.per_lambda.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& sp : result.per_lambda) {
    const double dx = std::log(sp.lambda) - mx;
    sxx += dx * dx;
    sxy += dx * (sp.mean_log_ratio - my);
  }
  result.fitted_exponent = sxy / sxx;
  for (auto& sp : result.per_lambda) sp.report.fitted_exponent = result.fitted_exponent;
  return result;
}

} // namespace symphonic
