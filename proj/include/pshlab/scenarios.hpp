#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pshlab/quad.hpp"
#include "pshlab/report.hpp"

namespace pshlab {

struct ScenarioOptions {
  QuadConfig quad;
  /// Overrides for the scenario defaults.
  std::optional<int> n;
  std::optional<double> p;
  std::optional<std::string> weight;
  std::uint64_t seed = 20240611;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct ScenarioResult {
  std::vector<ReportRow> rows;
  /// No row is Violated.
  bool ok = true;
};

const std::vector<std::string>& scenario_names();
const std::vector<std::string>& suite_names();

/// Runs a named scenario ("all" runs every one). Throws InputError for unknown names.
ScenarioResult run_scenario(const std::string& name, const ScenarioOptions& opts);

/// Inequality checks for `check --suite`. Throws InputError for unknown suites.
ScenarioResult run_suite(const std::string& suite, const ScenarioOptions& opts);

/// Runs the tasks on up to `threads` workers and concatenates their rows in task order.
/// A task that throws contributes one Violated row carrying the message.
std::vector<ReportRow> run_tasks(const std::string& scenario,
                                 const std::vector<std::function<std::vector<InequalityReport>()>>& tasks,
                                 unsigned threads);

}  // namespace pshlab
