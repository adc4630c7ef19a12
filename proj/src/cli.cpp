#include "symphonic/cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "symphonic/config.hpp"
#include "symphonic/errors.hpp"
#include "symphonic/expr.hpp"
#include "symphonic/runner.hpp"
#include "symphonic/serialize.hpp"
#include "symphonic/zoo.hpp"

namespace symphonic::cli {

namespace {

/// Raised for problems that deserve exit status 2.
struct UsageError : Error {
  using Error::Error;
};

struct Common {
  double p = 2.0;
  int m = 2;
  std::size_t samples = default_sample_count;
  std::uint64_t seed = 0;
  double tol = 1e-7;
  std::string json_path;
  std::string config_path;
};

void add_common(CLI::App* cmd, Common& c, bool with_p = true) {
  if (with_p) cmd->add_option("-p,--p", c.p, "Exponent p (>= 1)")->capture_default_str();
  cmd->add_option("--samples", c.samples, "Number of sample points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Sampling seed")->capture_default_str();
  cmd->add_option("--tol", c.tol, "Residual tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--json", c.json_path, "Write the JSON report to this path ('-' for stdout)");
  cmd->add_option("--config", c.config_path, "YAML file whose maps can be referred to by name");
}

RunConfig base_config(const Common& c) {
  RunConfig cfg;
  if (!c.config_path.empty()) {
    cfg = load_config(c.config_path);
    cfg.tasks.clear();
  }
  if (!(c.p >= 1.0)) throw UsageError("--p must be at least 1");
  return cfg;
}

MapPtr resolve_map(const RunConfig& cfg, const std::string& ref, const char* flag) {
  if (ref.empty()) throw UsageError(std::string(flag) + " is required");
  if (auto it = cfg.maps.find(ref); it != cfg.maps.end()) return it->second;
  try {
    return zoo::map(ref);
  } catch (const Error& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

TaskSpec task_from(const Common& c, std::string name, TaskKind kind) {
  TaskSpec t;
  t.name = std::move(name);
  t.kind = kind;
  t.p = c.p;
  t.m = c.m;
  t.samples = c.samples;
  t.seed = c.seed;
  t.tolerance = c.tol;
  return t;
}

void write_json(const Json& report, const std::string& path, std::ostream& out) {
  if (path.empty()) return;
  if (path == "-") {
    out << report.dump(2) << '\n';
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << report.dump(2) << '\n';
}

int finish(const RunConfig& cfg, const std::string& json_path, std::ostream& out) {
  const auto outcome = run(cfg);
  if (json_path != "-") out << render_summary(outcome.report);
  write_json(outcome.report, json_path.empty() ? cfg.output_path : json_path, out);
  return outcome.status;
}

IdentityKind identity_arg(const std::string& name) {
  if (auto k = identity_from_name(name)) return *k;
  std::string known;
  for (const auto& n : identity_names()) known += (known.empty() ? "" : ", ") + n;
  throw UsageError("unknown identity '" + name + "' (known: " + known + ")");
}

Sec3Variant variant_arg(const std::string& v) {
  if (v == "T") return Sec3Variant::T;
  if (v == "S") return Sec3Variant::S;
  throw UsageError("--variant must be T or S");
}

Json command_echo(const std::string& command, Json args) {
  args["command"] = command;
  return args;
}

int cmd_zoo(const std::string& json_path, std::ostream& out) {
  Json entries = Json::array();
  for (const auto& e : zoo::catalog()) {
    entries.push_back(to_json(e));
    if (json_path == "-") continue;
    out << std::left << std::setw(26) << e.id << std::setw(10) << zoo::entry_kind_name(e.kind);
    std::string tags;
    for (const auto& t : e.tags) tags += (tags.empty() ? "" : ", ") + t.to_string();
    out << e.description;
    if (!tags.empty()) out << "  [" << tags << "]";
    out << '\n';
  }
  write_json(Json{{"schema_version", report_schema_version}, {"entries", entries}}, json_path,
             out);
  return exit_pass;
}

int cmd_parse(const std::string& text, std::size_t arity, const std::vector<double>& at,
              std::ostream& out, std::ostream& err) {
  try {
    const auto e = expr::parse(text, arity);
    out << "canonical: " << e.to_string() << '\n';
    out << "variables: " << expr::variables_used(e.root()) << " of " << arity << '\n';
    if (!at.empty()) {
      if (at.size() != arity) throw UsageError("--at needs " + std::to_string(arity) + " values");
      out << "value: " << std::setprecision(17) << e.evaluate(std::span<const double>(at)) << '\n';
    }
    return exit_pass;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    err << "  " << text << '\n';
    err << "  " << std::string(std::min(e.offset(), text.size()), ' ') << "^\n";
    if (!e.expected().empty()) {
      err << "  expected:";
      for (const auto& x : e.expected()) err << ' ' << x;
      err << '\n';
    }
    return exit_fail;
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    err << "evaluation error: " << e.what() << '\n';
    return exit_fail;
  }
}

} // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for p-symphonic maps and their composition laws", "symphonic"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // zoo
  std::string zoo_json;
  auto* zoo_cmd = app.add_subcommand("zoo", "List the built-in manifolds, maps and fields");
  zoo_cmd->add_option("--json", zoo_json, "Write the catalog as JSON ('-' for stdout)");

  // parse
  std::string parse_text;
  std::size_t parse_arity = 3;
  std::vector<double> parse_at;
  auto* parse_cmd = app.add_subcommand("parse", "Parse an expression and print its canonical form");
  parse_cmd->add_option("expression", parse_text, "Expression in x1..xN")->required();
  parse_cmd->add_option("--arity", parse_arity, "Number of variables")
      ->check(CLI::Range(std::size_t{1}, std::size_t{12}))
      ->capture_default_str();
  parse_cmd->add_option("--at", parse_at, "Evaluate at this point")->delimiter(',');

  // check-map
  Common check;
  std::string check_map;
  auto* check_cmd = app.add_subcommand("check-map", "Run the map predicates on one map");
  check_cmd->add_option("--zoo,--map", check_map, "Zoo id or a map name from --config")
      ->required();
  add_common(check_cmd, check);

  // verify
  Common ver;
  std::string ver_identity, ver_u, ver_f, ver_variant = "T";
  auto* verify_cmd = app.add_subcommand("verify", "Check a composition identity on a pair of maps");
  verify_cmd->add_option("--identity", ver_identity, "Identity name")->required();
  verify_cmd->add_option("--u", ver_u, "Inner map (zoo id or config name)")->required();
  verify_cmd->add_option("--f", ver_f, "Outer map (zoo id or config name)")->required();
  verify_cmd->add_option("-m,--m", ver.m, "Power order m (>= 2)")->capture_default_str();
  verify_cmd->add_option("--variant", ver_variant, "Trace variant T or S")->capture_default_str();
  add_common(verify_cmd, ver);

  // sweep
  Common sw;
  std::string sw_identity, sw_family = "dilation", sw_f = "f_quad";
  std::vector<double> sw_lambdas{1.0, 1.5, 2.0, 3.0};
  double sw_exp_tol = 1e-5;
  auto* sweep_cmd = app.add_subcommand("sweep", "Fit the dilation exponent of an identity");
  sweep_cmd->add_option("--identity", sw_identity, "Identity name")->required();
  sweep_cmd->add_option("--family", sw_family, "Map family parameterised by dilation")
      ->capture_default_str();
  sweep_cmd->add_option("--f", sw_f, "Outer map")->capture_default_str();
  sweep_cmd->add_option("--lambdas", sw_lambdas, "Dilations to sample")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("-m,--m", sw.m, "Power order m (>= 2)")->capture_default_str();
  sweep_cmd->add_option("--exponent-tol", sw_exp_tol, "Allowed exponent error")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(sweep_cmd, sw);

  // run
  std::string run_config, run_json;
  auto* run_cmd = app.add_subcommand("run", "Run every task of a YAML configuration");
  run_cmd->add_option("--config", run_config, "YAML configuration")->required();
  run_cmd->add_option("--json", run_json, "Override the report path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return exit_pass;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return exit_usage;
  }

  try {
    if (*zoo_cmd) return cmd_zoo(zoo_json, out);
    if (*parse_cmd) return cmd_parse(parse_text, parse_arity, parse_at, out, err);

    if (*check_cmd) {
      auto cfg = base_config(check);
      const auto map = resolve_map(cfg, check_map, "--zoo");
      cfg.echo = command_echo("check-map", {{"map", check_map}, {"p", check.p}});
      std::vector<Predicate> preds{Predicate::p_symphonic};
      if (map->source().dim() >= map->target().dim())
        preds.push_back(Predicate::horizontally_conformal);
      preds.push_back(Predicate::totally_geodesic);
      for (auto pred : preds) {
        auto t = task_from(check, predicate_name(pred), TaskKind::predicate);
        t.predicate = pred;
        t.map = map;
        t.references["map"] = check_map;
        cfg.tasks.push_back(std::move(t));
      }
      return finish(cfg, check.json_path, out);
    }

    if (*verify_cmd) {
      auto cfg = base_config(ver);
      if (ver.m < 2) throw UsageError("--m must be at least 2");
      auto t = task_from(ver, ver_identity, TaskKind::identity);
      t.identity = identity_arg(ver_identity);
      t.variant = variant_arg(ver_variant);
      t.u = resolve_map(cfg, ver_u, "--u");
      t.f = resolve_map(cfg, ver_f, "--f");
      if (t.u->target().dim() != t.f->source().dim())
        throw UsageError("--u maps into dimension " + std::to_string(t.u->target().dim()) +
                         " but --f starts from dimension " +
                         std::to_string(t.f->source().dim()));
      t.references = {{"u", ver_u}, {"f", ver_f}};
      cfg.echo = command_echo("verify", {{"identity", ver_identity}, {"u", ver_u}, {"f", ver_f},
                                         {"p", ver.p}, {"m", ver.m}});
      cfg.tasks.push_back(std::move(t));
      return finish(cfg, ver.json_path, out);
    }

    if (*sweep_cmd) {
      auto cfg = base_config(sw);
      if (sw.m < 2) throw UsageError("--m must be at least 2");
      auto t = task_from(sw, sw_identity, TaskKind::sweep);
      t.identity = identity_arg(sw_identity);
      try {
        (void)expected_exponent(t.identity, t.p, t.m);
        t.family_fn = zoo::family(sw_family);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      t.family = sw_family;
      t.f = resolve_map(cfg, sw_f, "--f");
      t.lambdas = sw_lambdas;
      t.exponent_tolerance = sw_exp_tol;
      t.references = {{"family", sw_family}, {"f", sw_f}};
      cfg.echo = command_echo("sweep", {{"identity", sw_identity}, {"family", sw_family},
                                        {"f", sw_f}, {"lambdas", sw_lambdas}, {"p", sw.p}});
      cfg.tasks.push_back(std::move(t));
      return finish(cfg, sw.json_path, out);
    }

    if (*run_cmd) return finish(load_config(run_config), run_json, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_usage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_fail;
  }
  err << app.help();
  return exit_usage;
}

} // namespace symphonic::cli
