#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blockwright/common/result.hpp"
#include "blockwright/grammar/spec.hpp"
#include "blockwright/grid/grid_state.hpp"

namespace blockwright::eval {

enum class TaskId { I, II, III, IVSingle, IVTwo, V, Toolbench };

inline constexpr std::array<TaskId, 7> kAllTasks = {TaskId::I,     TaskId::II, TaskId::III,      TaskId::IVSingle,
                                                    TaskId::IVTwo, TaskId::V,  TaskId::Toolbench};

/// "i", "ii", "iii", "iv-single", "iv-two", "v", "toolbench".
std::string_view task_name(TaskId task);
std::optional<TaskId> task_from_name(std::string_view name);

/// One gold part of a generated case. spec holds what the sentence states,
/// with nulls at every omitted field; action is the intended placement.
struct GoldPart {
  PartialPlacementSpec spec;
  PlaceAction action;
  std::vector<Field> omitted;
};

/// Gold after one scripted turn of a shape fixture.
struct GoldTurn {
  std::string text;
  bool scored = true;
  std::vector<PlaceAction> adds;
};

struct ToolbenchWorkflow {
  std::string name;
  std::vector<std::pair<std::string, std::string>> slots; // name, role
  std::vector<nlohmann::json> example;
};

struct ToolbenchInfo {
  std::string workflow;
  std::map<std::string, nlohmann::json> bindings;
};

struct TaskCase {
  TaskId task = TaskId::I;
  std::string id;
  std::vector<std::string> turns;

  std::vector<GoldPart> parts;  // i, ii, iv
  std::vector<GoldTurn> script; // iii, v
  std::optional<std::size_t> name_turn, recall_turn; // v
  std::vector<PlaceAction> original;                 // v
  double floor = 0;                                  // iii: reference per-shape accuracy

  std::vector<ToolbenchWorkflow> workflows; // toolbench
  std::vector<ToolbenchInfo> new_information;
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> gold_calls;

  std::map<std::string, std::string> meta; // template, category, stratum

  /// {"task","id","text","turns","gold":[...],"meta":{...}} with explicit nulls.
  nlohmann::ordered_json to_json() const;
};

/// Directory holding task_iii/, task_v/ and toolbench/.
std::filesystem::path default_fixture_dir();

/// Pure in (task, seed). Shape and workflow tasks read fixtures and ignore
/// the seed; FixtureMissing names the absent file.
Result<std::vector<TaskCase>> generate_dataset(TaskId task, std::uint32_t seed,
                                               const std::filesystem::path &fixture_dir = default_fixture_dir());

/// One case per line.
std::string dataset_jsonl(const std::vector<TaskCase> &cases);

/// Reply the oracle gives when asked for a field of a gold placement:
/// "red", "the 7th column", "the 2nd row", "a nut".
std::string oracle_answer(const PlaceAction &gold, Field field);

} // namespace blockwright::eval
