#pragma once

// Run configuration loaded from YAML.
//
// Manifolds and maps are declared inline or by zoo id; tasks refer to them by
// name, falling back to zoo ids. Every problem is reported as ConfigError
// naming the offending item.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symphonic/geometry.hpp"
#include "symphonic/identities.hpp"
#include "symphonic/maps.hpp"
#include "symphonic/serialize.hpp"

namespace symphonic {

enum class TaskKind { predicate, identity, sweep };

enum class Predicate {
  p_symphonic,
  horizontally_conformal,
  totally_geodesic,
  conformal_function,
  morphism_probe,
};

const char* task_kind_name(TaskKind kind);
const char* predicate_name(Predicate p);
std::optional<Predicate> predicate_from_name(const std::string& name);

struct TaskSpec {
  std::string name;
  TaskKind kind = TaskKind::predicate;
  Predicate predicate = Predicate::p_symphonic;
  IdentityKind identity = IdentityKind::thm1_unweighted;

  MapPtr map;     // predicates
  MapPtr u;       // identities
  MapPtr f;       // identities and sweeps
  std::string family;
  MapFamily family_fn;

  double p = 2.0;
  int m = 2;
  std::vector<double> lambdas;
  Sec3Variant variant = Sec3Variant::T;
  std::size_t samples = default_sample_count;
  std::uint64_t seed = 0;
  double tolerance = 1e-7;
  /// Allowed |fitted - expected| for sweeps.
  double exponent_tolerance = 1e-5;

  /// Names as written in the configuration, for the report.
  std::map<std::string, std::string> references;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t samples = default_sample_count;
  double tolerance = 1e-7;

  std::map<std::string, ManifoldPtr> manifolds;
  std::map<std::string, MapPtr> maps;
  std::vector<TaskSpec> tasks;

  std::string output_path;
  std::string output_format = "json";

  /// The parsed document, echoed into reports.
  Json echo;
};

RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::string& path);

} // namespace symphonic
