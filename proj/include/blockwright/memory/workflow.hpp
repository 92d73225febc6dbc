#pragma once

#include <filesystem>
#include <map>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blockwright/common/result.hpp"

namespace blockwright::memory {

/// A concrete API call: name plus positional argument values.
struct WorkflowCall {
  std::string name;
  std::vector<nlohmann::json> args;

  bool operator==(const WorkflowCall &) const = default;

  /// create_event("standup", "Mon 9am")
  std::string to_string() const;
};

struct Slot {
  std::string name;
  std::string role;

  bool operator==(const Slot &) const = default;
};

struct WorkflowTemplate {
  std::string name;
  std::vector<Slot> slots;
  std::map<std::string, nlohmann::json> example_binding;

  bool operator==(const WorkflowTemplate &) const = default;

  /// create_event(q, time)
  std::string signature() const;
};

using Bindings = std::map<std::string, nlohmann::json>;

/// Replaces each argument of the example by the slot documented at its
/// position. Needs at least two non-boolean arguments.
Result<WorkflowTemplate> abstract_workflow(const WorkflowCall &example, const std::vector<Slot> &doc);

/// Fills every slot from the bindings; extra bindings are ignored.
Result<WorkflowCall> apply_workflow(const WorkflowTemplate &tmpl, const Bindings &bindings);

nlohmann::ordered_json call_to_json(const WorkflowCall &call);
Result<WorkflowCall> call_from_json(const nlohmann::json &j);
nlohmann::ordered_json template_to_json(const WorkflowTemplate &tmpl);
Result<WorkflowTemplate> template_from_json(const nlohmann::json &j);

class WorkflowStore {
public:
  WorkflowStore() = default;
  WorkflowStore(const WorkflowStore &other);

  void store(WorkflowTemplate tmpl);
  Result<WorkflowTemplate> retrieve(std::string_view name) const;
  std::vector<std::string> names() const;

  nlohmann::ordered_json to_json() const;
  static Result<WorkflowStore> from_json(const nlohmann::json &j);
  Status save(const std::filesystem::path &path) const;
  static Result<WorkflowStore> load(const std::filesystem::path &path);

private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, WorkflowTemplate> templates_;
};

} // namespace blockwright::memory
