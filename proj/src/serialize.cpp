#include "symphonic/serialize.hpp"

#include <cmath>

namespace symphonic {

namespace {

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json vector(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

Json vector(const Eigen::VectorXd& v) { return vector(to_std(v)); }

} // namespace

Json to_json(const ResidualReport& report, bool include_points) {
  Json j;
  j["identity"] = report.identity_name;
  j["verdict"] = report.verdict;
  j["max_residual"] = number(report.max_residual);
  j["mean_residual"] = number(report.mean_residual);
  j["tolerance"] = report.tolerance;
  j["evaluated_points"] = report.per_point.size();
  j["excluded_points"] = report.excluded_points;
  if (report.fitted_exponent) j["fitted_exponent"] = number(*report.fitted_exponent);
  j["annotations"] = report.annotations;
  j["warnings"] = report.warnings;
  if (include_points) {
    Json points = Json::array();
    for (const auto& r : report.per_point) {
      Json p;
      p["point"] = vector(r.point);
      if (!r.image.empty()) p["image"] = vector(r.image);
      p["lhs"] = vector(r.lhs);
      p["rhs"] = vector(r.rhs);
      p["residual"] = number(r.residual);
      points.push_back(std::move(p));
    }
    j["per_point"] = std::move(points);
  }
  return j;
}

Json to_json(const ConformalityReport& report, bool include_points) {
  Json j;
  j["map"] = report.map_name;
  j["verdict"] = report.verdict;
  j["max_residual"] = number(report.max_residual);
  j["min_lambda"] = number(report.min_lambda);
  j["max_lambda"] = number(report.max_lambda);
  j["lambda_constant"] = report.lambda_constant;
  j["tolerance"] = report.tolerance;
  j["warnings"] = report.warnings;
  if (include_points) {
    Json points = Json::array();
    for (const auto& r : report.per_point)
      points.push_back({{"point", vector(r.point)},
                        {"lambda_sq", number(r.lambda_sq)},
                        {"residual", number(r.residual)}});
    j["per_point"] = std::move(points);
  }
  return j;
}

Json to_json(const SweepResult& sweep, bool include_points) {
  Json j;
  j["identity"] = sweep.identity_name;
  j["fitted_exponent"] = number(sweep.fitted_exponent);
  j["expected_exponent"] = sweep.expected_exponent;
  Json rows = Json::array();
  for (const auto& row : sweep.per_lambda) {
    Json r;
    r["lambda"] = row.lambda;
    r["mean_log_ratio"] = number(row.mean_log_ratio);
    r["report"] = to_json(row.report, include_points);
    rows.push_back(std::move(r));
  }
  j["per_lambda"] = std::move(rows);
  return j;
}

Json to_json(const Theorem7Terms& t) {
  Json j;
  j["lambda_sq"] = number(t.lambda_sq);
  j["weight_sq"] = number(t.weight_sq);
  j["lhs"] = vector(t.lhs);
  j["main_term"] = vector(t.main_term);
  j["I"] = vector(t.I);
  j["I_without_tension"] = vector(t.I_without_tension);
  j["tension_term"] = vector(t.tension_term);
  Json ii = Json::array();
  for (const auto& v : t.II_terms) ii.push_back(vector(v));
  Json iii = Json::array();
  for (const auto& v : t.III_terms) iii.push_back(vector(v));
  j["II_terms"] = std::move(ii);
  j["III_terms"] = std::move(iii);
  j["II"] = vector(t.II);
  j["III"] = vector(t.III);
  j["du_part"] = vector(t.du_part);
  j["frame_part"] = vector(t.frame_part);
  j["assembled"] = vector(t.assembled);
  j["decomposition_residual"] = number(t.decomposition_residual);
  return j;
}

Json to_json(const Box& box) {
  Json out = Json::array();
  for (const auto& s : box.sides()) out.push_back({number(s.lo), number(s.hi)});
  return out;
}

Json to_json(const zoo::ZooEntry& entry) {
  Json j;
  j["id"] = entry.id;
  j["kind"] = zoo::entry_kind_name(entry.kind);
  j["description"] = entry.description;
  Json tags = Json::array();
  for (const auto& t : entry.tags) tags.push_back(t.to_string());
  j["tags"] = std::move(tags);
  if (entry.manifold) {
    j["dim"] = entry.manifold->dim();
    j["domain"] = to_json(entry.manifold->domain());
  }
  if (entry.map) {
    j["source"] = entry.map->source().name();
    j["target"] = entry.map->target().name();
    Json comps = Json::array();
    for (const auto& c : entry.map->components()) comps.push_back(c.to_string());
    j["components"] = std::move(comps);
  }
  return j;
}

} // namespace symphonic
