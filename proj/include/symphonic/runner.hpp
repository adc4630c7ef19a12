#pragma once

#include <string>

#include "symphonic/config.hpp"
#include "symphonic/serialize.hpp"

namespace symphonic {

inline constexpr int report_schema_version = 1;

/// Exit codes shared by the runner and the command line.
enum ExitStatus : int { exit_pass = 0, exit_fail = 1, exit_usage = 2 };

struct TaskOutcome {
  Json record;
  bool passed = false;
  bool errored = false;
};

/// Runs one task. Engine errors are caught and recorded with status "error".
TaskOutcome run_task(const TaskSpec& task);

struct RunOutcome {
  Json report;
  int status = exit_pass;
};

/// Runs every task in order. Status is 0 when all pass (or there are none)
/// and 1 when any fails or errors.
RunOutcome run(const RunConfig& config);

/// Plain-text table of a run report, one line per task.
std::string render_summary(const Json& report);

} // namespace symphonic
