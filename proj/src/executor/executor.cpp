#include "blockwright/executor/executor.hpp"

#include <algorithm>

#include "blockwright/grid/wire.hpp"

namespace blockwright::executor {

nlohmann::ordered_json ActionProgram::to_json() const {
  nlohmann::ordered_json actions_json = nlohmann::ordered_json::array();
  for (const auto &a : actions) actions_json.push_back(wire::action_to_json(a));
  return {{"origin", origin}, {"actions", actions_json}};
}

Result<ActionProgram> ActionProgram::from_json(const nlohmann::json &j) {
  if (!j.is_object() || !j.contains("actions") || !j.at("actions").is_array()) {
    return make_error(Errc::MalformedOutput, "program must hold an actions array");
  }
  ActionProgram p;
  p.origin = j.value("origin", "");
  for (const auto &a : j.at("actions")) {
    auto action = wire::action_from_json(a);
    if (!action) return action.error();
    p.actions.push_back(std::move(action).value());
  }
  return p;
}

Result<ActionProgram> compile(const std::vector<PartialPlacementSpec> &specs, std::string origin) {
  std::vector<PlaceAction> places;
  places.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto &s = specs[i];
    for (Field f : {Field::Kind, Field::Color, Field::X, Field::Y, Field::Z}) {
      if (!s.has(f)) {
        return make_error(Errc::IncompleteSpec,
                          "spec " + std::to_string(i + 1) + " has no " + std::string(field_name(f)),
                          static_cast<int>(i));
      }
    }
    if (s.x2 && (*s.kind != PartKind::HorizontalBridge || *s.x2 != *s.x + 1)) {
      return make_error(Errc::IncompleteSpec, "spec " + std::to_string(i + 1) + " has an inconsistent x2",
                        static_cast<int>(i));
    }
    if (s.y2 && (*s.kind != PartKind::VerticalBridge || *s.y2 != *s.y + 1)) {
      return make_error(Errc::IncompleteSpec, "spec " + std::to_string(i + 1) + " has an inconsistent y2",
                        static_cast<int>(i));
    }
    places.push_back({*s.kind, *s.color, {*s.x, *s.y, *s.z}});
  }
  std::stable_sort(places.begin(), places.end(),
                   [](const PlaceAction &a, const PlaceAction &b) { return a.anchor.z < b.anchor.z; });
  ActionProgram p;
  p.origin = std::move(origin);
  for (auto &a : places) p.actions.emplace_back(a);
  return p;
}

bool ExecutionLog::ok() const { return failure() == nullptr; }

const LogEntry *ExecutionLog::failure() const {
  for (const auto &e : entries) {
    if (e.error) return &e;
  }
  return nullptr;
}

std::string ExecutionLog::to_jsonl() const {
  std::string out;
  for (const auto &e : entries) {
    nlohmann::ordered_json j;
    j["origin"] = origin;
    j["index"] = e.index;
    j["action"] = wire::action_to_json(e.action);
    j["ok"] = !e.error.has_value();
    if (e.error) {
      j["error"] = errc_name(e.error->code);
      j["message"] = e.error->message;
    }
    out += j.dump() + "\n";
  }
  return out;
}

RunResult run(const ActionProgram &program, const GridState &grid) {
  RunResult result{grid, {program.origin, {}}};
  GridState current = grid;
  for (std::size_t i = 0; i < program.actions.size(); ++i) {
    auto next = blockwright::apply(current, program.actions[i]);
    if (!next) {
      LogEntry failed;
      failed.index = i + 1;
      failed.action = program.actions[i];
      failed.error = next.error();
      result.log.entries.push_back(std::move(failed));
      result.grid = grid;
      return result;
    }
    LogEntry done;
    done.index = i + 1;
    done.action = program.actions[i];
    result.log.entries.push_back(std::move(done));
    current = std::move(next).value();
  }
  result.grid = std::move(current);
  return result;
}

} // namespace blockwright::executor
