#include "symphonic/runner.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "symphonic/analysis.hpp"
#include "symphonic/errors.hpp"
#include "symphonic/sampling.hpp"

namespace symphonic {

namespace {

PointSet samples_for(const SmoothMap& map, const TaskSpec& task) {
  return sample_box(map.source().sampling_box(), task.samples, task.seed);
}

Json parameters(const TaskSpec& task) {
  Json j;
  for (const auto& [key, ref] : task.references) j[key] = ref;
  const bool uses_p = task.kind != TaskKind::predicate ||
                      task.predicate == Predicate::p_symphonic ||
                      task.predicate == Predicate::morphism_probe;
  if (uses_p) j["p"] = task.p;
  if (task.kind != TaskKind::predicate && task.identity == IdentityKind::thm6_m_version)
    j["m"] = task.m;
  if (task.kind != TaskKind::predicate && task.identity == IdentityKind::sec3_S_variant)
    j["variant"] = task.variant == Sec3Variant::T ? "T" : "S";
  if (task.kind == TaskKind::sweep) {
    j["lambdas"] = task.lambdas;
    j["exponent_tolerance"] = task.exponent_tolerance;
  }
  j["samples"] = task.samples;
  j["seed"] = task.seed;
  j["tolerance"] = task.tolerance;
  return j;
}

std::pair<Json, bool> run_predicate(const TaskSpec& task) {
  const auto pts = samples_for(*task.map, task);
  switch (task.predicate) {
    case Predicate::p_symphonic: {
      const auto r = is_p_symphonic(task.map, task.p, pts, task.tolerance);
      return {to_json(r), r.verdict};
    }
    case Predicate::horizontally_conformal: {
      const auto r = horizontal_conformality(*task.map, pts, task.tolerance);
      return {to_json(r), r.verdict};
    }
    case Predicate::totally_geodesic: {
      const auto r = is_totally_geodesic(*task.map, pts, task.tolerance);
      return {to_json(r), r.verdict};
    }
    case Predicate::conformal_function: {
      const auto r = is_conformal_function(*task.map, pts, task.tolerance);
      return {to_json(r), r.verdict};
    }
    case Predicate::morphism_probe: {
      const auto r = morphism_probe_test(task.map, task.p, pts, task.tolerance);
      return {to_json(r), r.verdict};
    }
  }
  throw ArgumentError("unhandled predicate");
}

IdentityCase identity_case(const TaskSpec& task, const MapPtr& u) {
  IdentityCase c;
  c.kind = task.identity;
  c.u = u;
  c.f = task.f;
  c.p = task.p;
  c.m = task.m;
  c.sample_count = task.samples;
  c.seed = task.seed;
  c.tol = task.tolerance;
  if (task.identity == IdentityKind::sec3_T_theorem) c.form = Sec3Form::theorem;
  if (task.identity == IdentityKind::sec3_T_lemma) c.form = Sec3Form::lemma;
  return c;
}

std::pair<Json, bool> run_identity(const TaskSpec& task) {
  const auto c = identity_case(task, task.u);
  const bool trace_kind = task.identity == IdentityKind::sec3_T_theorem ||
                          task.identity == IdentityKind::sec3_T_lemma;
  const auto r = trace_kind && task.variant == Sec3Variant::S
                     ? verify_sec3_T(task.u, task.f, samples_for(*task.u, task), task.tolerance,
                                     Sec3Variant::S, c.form)
                     : verify(c);
  return {to_json(r), r.verdict};
}

std::pair<Json, bool> run_sweep(const TaskSpec& task) {
  auto base = identity_case(task, nullptr);
  const auto sweep = exponent_sweep(base, task.family_fn, task.lambdas);
  bool ok = std::abs(sweep.fitted_exponent - sweep.expected_exponent) < task.exponent_tolerance;
  for (const auto& row : sweep.per_lambda) ok = ok && row.report.verdict;
  return {to_json(sweep), ok};
}

std::string format_number(const Json& v) {
  if (!v.is_number()) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v.get<double>());
  return buf;
}

} // namespace

TaskOutcome run_task(const TaskSpec& task) {
  TaskOutcome out;
  Json& rec = out.record;
  rec["name"] = task.name;
  rec["kind"] = task_kind_name(task.kind);
  if (task.kind == TaskKind::predicate)
    rec["predicate"] = predicate_name(task.predicate);
  else
    rec["identity"] = identity_name(task.identity);
  rec["parameters"] = parameters(task);
  try {
    std::pair<Json, bool> result;
    switch (task.kind) {
      case TaskKind::predicate: result = run_predicate(task); break;
      case TaskKind::identity: result = run_identity(task); break;
      case TaskKind::sweep: result = run_sweep(task); break;
    }
    out.passed = result.second;
    rec["status"] = out.passed ? "pass" : "fail";
    rec["result"] = std::move(result.first);
  } catch (const Error& e) {
    out.errored = true;
    rec["status"] = "error";
    rec["error"] = e.what();
  }
  return out;
}

RunOutcome run(const RunConfig& config) {
  RunOutcome out;
  Json tasks = Json::array();
  std::size_t passed = 0, failed = 0, errors = 0;
  for (const auto& task : config.tasks) {
    auto t = run_task(task);
    if (t.errored) ++errors;
    else if (t.passed) ++passed;
    else ++failed;
    tasks.push_back(std::move(t.record));
  }
  out.status = (failed == 0 && errors == 0) ? exit_pass : exit_fail;

  Json& r = out.report;
  r["schema_version"] = report_schema_version;
  r["config"] = config.echo.is_null() ? Json::object() : config.echo;
  r["tasks"] = std::move(tasks);
  r["summary"] = {{"total", config.tasks.size()},
                  {"passed", passed},
                  {"failed", failed},
                  {"errors", errors},
                  {"status", out.status}};
  return out;
}

std::string render_summary(const Json& report) {
  std::ostringstream os;
  for (const auto& t : report.at("tasks")) {
    const std::string status = t.at("status").get<std::string>();
    std::string what = t.contains("predicate") ? t["predicate"].get<std::string>()
                                               : t["identity"].get<std::string>();
    os << (status == "pass" ? "PASS " : status == "fail" ? "FAIL " : "ERROR") << "  "
       << t.at("name").get<std::string>();
    if (what != t.at("name").get<std::string>()) os << "  " << what;
    if (status == "error") {
      os << "  " << t.at("error").get<std::string>();
    } else {
      const auto& res = t.at("result");
      if (res.contains("fitted_exponent") && res.contains("expected_exponent")) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "  exponent %.6f (expected %.6f)",
                      res["fitted_exponent"].is_number() ? res["fitted_exponent"].get<double>()
                                                         : NAN,
                      res["expected_exponent"].get<double>());
        os << buf;
      } else {
        os << "  max residual " << format_number(res.value("max_residual", Json()));
        if (res.contains("min_lambda"))
          os << "  lambda in [" << format_number(res["min_lambda"]) << ", "
             << format_number(res["max_lambda"]) << "]";
      }
    }
    os << '\n';
  }
  const auto& s = report.at("summary");
  os << s.at("passed").get<std::size_t>() << " passed, " << s.at("failed").get<std::size_t>()
     << " failed, " << s.at("errors").get<std::size_t>() << " errors\n";
  return os.str();
}

} // namespace symphonic
