#pragma once

// Built-in manifolds, maps and scalar fields, addressable by id.
//
// Ids take optional comma-separated arguments after a colon, for example
// "dilation:2", "dilation:1.5,3", "scaled_rotation:1.3" or "radial_power:2,3".

#include <optional>
#include <string>
#include <vector>

#include "symphonic/geometry.hpp"
#include "symphonic/identities.hpp"
#include "symphonic/maps.hpp"

namespace symphonic::zoo {

enum class TagKind {
  totally_geodesic,
  not_totally_geodesic,
  horizontally_conformal,      // value: constant dilation, empty when pointwise
  not_horizontally_conformal,
  conformal,                   // equal dimensions; value as above
  isometry,
  p_symphonic,                 // value: p
  not_p_symphonic,             // value: p
};

struct Tag {
  TagKind kind;
  std::optional<double> value;

  std::string to_string() const;
};

enum class EntryKind { manifold, map, field };

struct ZooEntry {
  std::string id;
  EntryKind kind = EntryKind::map;
  std::string description;
  std::vector<Tag> tags;
  ManifoldPtr manifold;  // set for manifolds
  MapPtr map;            // set for maps and fields
};

const char* entry_kind_name(EntryKind kind);

/// Every entry with its default parameters.
std::vector<ZooEntry> catalog();

/// Entry for an id with arguments. Throws ArgumentError naming the id when it
/// is unknown or its arguments are malformed.
ZooEntry entry(const std::string& id);

ManifoldPtr manifold(const std::string& id);
MapPtr map(const std::string& id);

/// Dilation-parameterised family: "dilation[:n]", "scaled_projection" or
/// "scaled_rotation[:theta]".
MapFamily family(const std::string& id);

/// The polynomial and trigonometric test maps R^2 -> R^2.
std::vector<std::string> test_map_ids();

} // namespace symphonic::zoo
