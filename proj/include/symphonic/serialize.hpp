#pragma once

// JSON views of the result types. Non-finite doubles become null.

#include <nlohmann/json.hpp>

#include "symphonic/analysis.hpp"
#include "symphonic/identities.hpp"
#include "symphonic/report.hpp"
#include "symphonic/zoo.hpp"

namespace symphonic {

using Json = nlohmann::ordered_json;

Json to_json(const ResidualReport& report, bool include_points = true);
Json to_json(const ConformalityReport& report, bool include_points = true);
Json to_json(const SweepResult& sweep, bool include_points = false);
Json to_json(const Theorem7Terms& terms);
Json to_json(const zoo::ZooEntry& entry);
Json to_json(const Box& box);

} // namespace symphonic
