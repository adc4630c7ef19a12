#include "symphonic/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "symphonic/errors.hpp"
#include "symphonic/zoo.hpp"

namespace symphonic {

const char* task_kind_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::predicate: return "predicate";
    case TaskKind::identity: return "identity";
    case TaskKind::sweep: return "sweep";
  }
  return "?";
}

const char* predicate_name(Predicate p) {
  switch (p) {
    case Predicate::p_symphonic: return "p_symphonic";
    case Predicate::horizontally_conformal: return "horizontally_conformal";
    case Predicate::totally_geodesic: return "totally_geodesic";
    case Predicate::conformal_function: return "conformal_function";
    case Predicate::morphism_probe: return "morphism_probe";
  }
  return "?";
}

std::optional<Predicate> predicate_from_name(const std::string& name) {
  for (auto p : {Predicate::p_symphonic, Predicate::horizontally_conformal,
                 Predicate::totally_geodesic, Predicate::conformal_function,
                 Predicate::morphism_probe})
    if (name == predicate_name(p)) return p;
  return std::nullopt;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

std::string mark(const YAML::Node& node) {
  const auto m = node.Mark();
  if (m.line < 0) return {};
  return " (line " + std::to_string(m.line + 1) + ")";
}

void check_keys(const YAML::Node& node, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!node.IsMap()) fail(where, "expected a mapping" + mark(node));
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(where, "unknown key '" + key + "'" + mark(kv.first));
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& where, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(where, "bad value for '" + key + "'" + mark(node));
  }
}

std::string text_of(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) fail(where, "expected a scalar expression" + mark(node));
  return node.Scalar();
}

Json echo(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      Json out = Json::array();
      for (const auto& item : node) out.push_back(echo(item));
      return out;
    }
    case YAML::NodeType::Map: {
      Json out = Json::object();
      for (const auto& kv : node) out[kv.first.as<std::string>()] = echo(kv.second);
      return out;
    }
    case YAML::NodeType::Scalar: break;
  }
  // Quoted scalars stay strings; plain ones are typed when they look typed.
  if (node.Tag() == "!") return node.Scalar();
  long long i = 0;
  if (YAML::convert<long long>::decode(node, i)) return i;
  double d = 0.0;
  if (YAML::convert<double>::decode(node, d)) {
    if (std::isfinite(d)) return d;
    return node.Scalar();
  }
  bool b = false;
  if (YAML::convert<bool>::decode(node, b)) return b;
  return node.Scalar();
}

Box parse_box(const YAML::Node& node, std::size_t dim, const std::string& where,
              const std::string& key) {
  if (!node.IsSequence() || node.size() != dim)
    fail(where, "'" + key + "' needs " + std::to_string(dim) + " [lo, hi] pairs" + mark(node));
  std::vector<Interval> sides;
  for (const auto& pair : node) {
    if (!pair.IsSequence() || pair.size() != 2)
      fail(where, "'" + key + "' entries must be [lo, hi]" + mark(pair));
    const double lo = scalar<double>(pair[0], where, key);
    const double hi = scalar<double>(pair[1], where, key);
    if (!(lo < hi)) fail(where, "'" + key + "' has an empty interval" + mark(pair));
    sides.push_back({lo, hi});
  }
  return Box(std::move(sides));
}

class Builder {
public:
  explicit Builder(const YAML::Node& root) : root_(root) {}

  RunConfig build() {
    if (!root_ || root_.IsNull()) fail("config", "document is empty");
    check_keys(root_, "config",
               {"seed", "samples", "tolerance", "manifolds", "maps", "tasks", "output"});
    cfg_.echo = echo(root_);

    if (auto n = root_["seed"]) cfg_.seed = scalar<std::uint64_t>(n, "config", "seed");
    if (auto n = root_["samples"]) cfg_.samples = positive_count(n, "config");
    if (auto n = root_["tolerance"]) cfg_.tolerance = positive(n, "config", "tolerance");

    if (auto n = root_["manifolds"]) {
      if (!n.IsMap()) fail("manifolds", "expected a mapping of name to manifold" + mark(n));
      for (const auto& kv : n) {
        const auto name = kv.first.as<std::string>();
        cfg_.manifolds[name] = build_manifold(name, kv.second);
      }
    }
    if (auto n = root_["maps"]) {
      if (!n.IsMap()) fail("maps", "expected a mapping of name to map" + mark(n));
      for (const auto& kv : n) {
        const auto name = kv.first.as<std::string>();
        cfg_.maps[name] = build_map(name, kv.second);
      }
    }
    if (auto n = root_["tasks"]) {
      if (!n.IsSequence() && !n.IsNull()) fail("tasks", "expected a list" + mark(n));
      std::set<std::string> seen;
      std::size_t index = 0;
      for (const auto& t : n) {
        auto task = build_task(t, index++);
        if (!seen.insert(task.name).second) fail("task '" + task.name + "'", "duplicate name");
        cfg_.tasks.push_back(std::move(task));
      }
    }
    if (auto n = root_["output"]) {
      check_keys(n, "output", {"path", "format"});
      if (auto p = n["path"]) cfg_.output_path = scalar<std::string>(p, "output", "path");
      if (auto f = n["format"]) cfg_.output_format = scalar<std::string>(f, "output", "format");
      if (cfg_.output_format != "json") fail("output", "format must be 'json'");
    }
    return std::move(cfg_);
  }

private:
  std::size_t positive_count(const YAML::Node& n, const std::string& where) {
    const auto v = scalar<long long>(n, where, "samples");
    if (v <= 0) fail(where, "samples must be positive" + mark(n));
    return static_cast<std::size_t>(v);
  }

  double positive(const YAML::Node& n, const std::string& where, const std::string& key) {
    const double v = scalar<double>(n, where, key);
    if (!(v > 0.0) || !std::isfinite(v)) fail(where, key + " must be positive" + mark(n));
    return v;
  }

  ManifoldPtr build_manifold(const std::string& name, const YAML::Node& node) {
    const std::string where = "manifold '" + name + "'";
    if (node.IsScalar()) return zoo_manifold(node.Scalar(), where);
    check_keys(node, where, {"zoo", "dim", "metric", "domain", "sampling_box"});
    if (auto z = node["zoo"]) {
      if (node.size() != 1) fail(where, "'zoo' cannot be combined with other keys");
      return zoo_manifold(scalar<std::string>(z, where, "zoo"), where);
    }
    if (!node["dim"]) fail(where, "missing 'dim'");
    const auto dim_raw = scalar<long long>(node["dim"], where, "dim");
    if (dim_raw < 1 || dim_raw > 12) fail(where, "dim must be between 1 and 12");
    const auto dim = static_cast<std::size_t>(dim_raw);

    const Box domain = node["domain"] ? parse_box(node["domain"], dim, where, "domain")
                                      : Box::unbounded(dim);
    std::optional<Box> sampling;
    if (auto s = node["sampling_box"]) sampling = parse_box(s, dim, where, "sampling_box");

    try {
      const auto metric = node["metric"];
      if (!metric || (metric.IsScalar() && metric.Scalar() == "euclidean"))
        return std::make_shared<const ChartManifold>(
            ChartManifold::euclidean(dim, name, domain, sampling));
      if (!metric.IsSequence() || metric.size() != dim)
        fail(where, "metric must be 'euclidean' or a " + std::to_string(dim) + "x" +
                        std::to_string(dim) + " matrix" + mark(metric));
      std::vector<std::vector<expr::Expression>> g(dim);
      for (std::size_t a = 0; a < dim; ++a) {
        const auto row = metric[a];
        if (!row.IsSequence() || row.size() != dim)
          fail(where, "metric row " + std::to_string(a + 1) + " needs " + std::to_string(dim) +
                          " entries" + mark(row));
        for (std::size_t b = 0; b < dim; ++b) g[a].push_back(expression(row[b], dim, where));
      }
      return std::make_shared<const ChartManifold>(name, domain, std::move(g), sampling);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }

  expr::Expression expression(const YAML::Node& node, std::size_t arity,
                              const std::string& where) {
    const auto src = text_of(node, where);
    try {
      return expr::parse(src, arity);
    } catch (const ParseError& e) {
      fail(where, "cannot parse '" + src + "' at offset " + std::to_string(e.offset()) + ": " +
                      e.what());
    }
  }

  ManifoldPtr zoo_manifold(const std::string& id, const std::string& where) {
    try {
      return zoo::manifold(id);
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }

  ManifoldPtr manifold_ref(const std::string& ref, const std::string& where) {
    if (auto it = cfg_.manifolds.find(ref); it != cfg_.manifolds.end()) return it->second;
    try {
      return zoo::manifold(ref);
    } catch (const Error&) {
      fail(where, "unknown manifold '" + ref + "'");
    }
  }

  MapPtr build_map(const std::string& name, const YAML::Node& node) {
    const std::string where = "map '" + name + "'";
    if (node.IsScalar()) return zoo_map(node.Scalar(), where);
    check_keys(node, where, {"zoo", "source", "target", "components"});
    if (auto z = node["zoo"]) {
      if (node.size() != 1) fail(where, "'zoo' cannot be combined with other keys");
      return zoo_map(scalar<std::string>(z, where, "zoo"), where);
    }
    for (const char* key : {"source", "target", "components"})
      if (!node[key]) fail(where, std::string("missing '") + key + "'");
    const auto source = manifold_ref(scalar<std::string>(node["source"], where, "source"), where);
    const auto target = manifold_ref(scalar<std::string>(node["target"], where, "target"), where);
    const auto comps = node["components"];
    if (!comps.IsSequence() || comps.size() != target->dim())
      fail(where, "needs " + std::to_string(target->dim()) + " components" + mark(comps));
    std::vector<expr::Expression> exprs;
    for (const auto& c : comps) exprs.push_back(expression(c, source->dim(), where));
    try {
      return std::make_shared<const SmoothMap>(name, source, target, std::move(exprs));
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }

  MapPtr zoo_map(const std::string& id, const std::string& where) {
    try {
      return zoo::map(id);
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }

  MapPtr map_ref(const YAML::Node& node, const std::string& key, const std::string& where,
                 TaskSpec& task) {
    if (!node[key]) fail(where, "missing '" + key + "'");
    const auto ref = scalar<std::string>(node[key], where, key);
    task.references[key] = ref;
    if (auto it = cfg_.maps.find(ref); it != cfg_.maps.end()) return it->second;
    try {
      return zoo::map(ref);
    } catch (const Error&) {
      fail(where, "unknown map '" + ref + "'");
    }
  }

  TaskSpec build_task(const YAML::Node& node, std::size_t index) {
    TaskSpec task;
    task.name = "task" + std::to_string(index + 1);
    std::string where = "task " + std::to_string(index + 1);
    check_keys(node, where,
               {"name", "kind", "predicate", "identity", "map", "u", "f", "family", "p", "m",
                "lambdas", "variant", "samples", "seed", "tolerance", "exponent_tolerance"});
    if (auto n = node["name"]) {
      task.name = scalar<std::string>(n, where, "name");
      where = "task '" + task.name + "'";
    }
    if (!node["kind"]) fail(where, "missing 'kind'");
    const auto kind = scalar<std::string>(node["kind"], where, "kind");
    if (kind == "predicate") task.kind = TaskKind::predicate;
    else if (kind == "identity") task.kind = TaskKind::identity;
    else if (kind == "sweep") task.kind = TaskKind::sweep;
    else fail(where, "unknown kind '" + kind + "' (predicate, identity or sweep)");

    task.samples = node["samples"] ? positive_count(node["samples"], where) : cfg_.samples;
    task.seed = node["seed"] ? scalar<std::uint64_t>(node["seed"], where, "seed") : cfg_.seed;
    task.tolerance =
        node["tolerance"] ? positive(node["tolerance"], where, "tolerance") : cfg_.tolerance;
    if (auto n = node["exponent_tolerance"])
      task.exponent_tolerance = positive(n, where, "exponent_tolerance");
    if (auto n = node["p"]) {
      task.p = scalar<double>(n, where, "p");
      if (!(task.p >= 1.0) || !std::isfinite(task.p)) fail(where, "p must be at least 1");
    }
    if (auto n = node["m"]) {
      task.m = scalar<int>(n, where, "m");
      if (task.m < 2) fail(where, "m must be at least 2");
    }
    if (auto n = node["variant"]) {
      const auto v = scalar<std::string>(n, where, "variant");
      if (v == "T") task.variant = Sec3Variant::T;
      else if (v == "S") task.variant = Sec3Variant::S;
      else fail(where, "variant must be T or S");
    }

    switch (task.kind) {
      case TaskKind::predicate: {
        if (!node["predicate"]) fail(where, "missing 'predicate'");
        const auto name = scalar<std::string>(node["predicate"], where, "predicate");
        const auto p = predicate_from_name(name);
        if (!p) fail(where, "unknown predicate '" + name + "'");
        task.predicate = *p;
        task.map = map_ref(node, "map", where, task);
        break;
      }
      case TaskKind::identity: {
        task.identity = identity_ref(node, where);
        task.u = map_ref(node, "u", where, task);
        task.f = map_ref(node, "f", where, task);
        if (task.u->target().dim() != task.f->source().dim())
          fail(where, "u maps into dimension " + std::to_string(task.u->target().dim()) +
                          " but f starts from dimension " +
                          std::to_string(task.f->source().dim()));
        break;
      }
      case TaskKind::sweep: {
        task.identity = identity_ref(node, where);
        try {
          (void)expected_exponent(task.identity, task.p, task.m);
        } catch (const Error& e) {
          fail(where, e.what());
        }
        task.f = map_ref(node, "f", where, task);
        task.family = node["family"] ? scalar<std::string>(node["family"], where, "family")
                                     : std::string("dilation");
        task.references["family"] = task.family;
        try {
          task.family_fn = zoo::family(task.family);
        } catch (const Error&) {
          fail(where, "unknown family '" + task.family + "'");
        }
        if (!node["lambdas"] || !node["lambdas"].IsSequence())
          fail(where, "'lambdas' must be a list");
        std::set<double> distinct;
        for (const auto& l : node["lambdas"]) {
          const double v = scalar<double>(l, where, "lambdas");
          if (!(v > 0.0)) fail(where, "lambdas must be positive");
          task.lambdas.push_back(v);
          distinct.insert(v);
        }
        if (distinct.size() < 2) fail(where, "lambdas need at least two distinct values");
        const auto probe = task.family_fn(task.lambdas.front());
        if (probe->target().dim() != task.f->source().dim())
          fail(where, "family '" + task.family + "' does not map into the source of f");
        break;
      }
    }
    return task;
  }

  IdentityKind identity_ref(const YAML::Node& node, const std::string& where) {
    if (!node["identity"]) fail(where, "missing 'identity'");
    const auto name = scalar<std::string>(node["identity"], where, "identity");
    const auto kind = identity_from_name(name);
    if (!kind) fail(where, "unknown identity '" + name + "'");
    return *kind;
  }

  YAML::Node root_;
  RunConfig cfg_;
};

} // namespace

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return Builder(root).build();
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

} // namespace symphonic
