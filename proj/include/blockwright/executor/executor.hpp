#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blockwright/common/result.hpp"
#include "blockwright/grammar/spec.hpp"
#include "blockwright/grid/grid_state.hpp"

namespace blockwright::executor {

struct ActionProgram {
  std::vector<Action> actions;
  std::string origin;

  nlohmann::ordered_json to_json() const;
  static Result<ActionProgram> from_json(const nlohmann::json &j);
};

/// One action per spec, stable-sorted by height so supports come first.
/// Every spec must carry kind, color, x, y and z.
Result<ActionProgram> compile(const std::vector<PartialPlacementSpec> &specs, std::string origin = {});

struct LogEntry {
  std::size_t index = 0; // 1-based position in the program
  Action action;
  std::optional<Error> error;
};

struct ExecutionLog {
  std::string origin;
  std::vector<LogEntry> entries;

  bool ok() const;
  /// The failing entry, if any.
  const LogEntry *failure() const;
  std::string to_jsonl() const;
};

struct RunResult {
  GridState grid;
  ExecutionLog log;
};

/// All or nothing: on the first failing action the input grid comes back
/// untouched and the log names that action.
RunResult run(const ActionProgram &program, const GridState &grid);

} // namespace blockwright::executor
