#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blockwright/agent/pipeline.hpp"
#include "blockwright/llm/backend.hpp"
#include "blockwright/memory/shape_store.hpp"

namespace blockwright::service {

/// Service configuration file:
///   {"backend": {BackendConfig keys},
///    "shape_library": "shapes.json",   // optional; every session starts with a copy
///    "data_dir": "data"}               // optional; sessions/ logs live here
/// Relative paths resolve against the file's directory.
struct ServiceConfig {
  llm::BackendConfig backend;
  std::optional<std::filesystem::path> shape_library;
  std::filesystem::path data_dir = "data";

  /// BadConfig on malformed values or a missing shape library.
  Status validate() const;
  static Result<ServiceConfig> from_json(const nlohmann::json &j, const std::filesystem::path &base = {});
  static Result<ServiceConfig> load(const std::filesystem::path &path);
  nlohmann::ordered_json to_json() const;
};

/// Pushed to event-stream subscribers. seq is 1-based and dense per session.
struct Event {
  std::uint64_t seq = 0;
  std::string type; // instruction, answer, cancel, clarify, grid, stored, error
  nlohmann::ordered_json data;
};

struct ShapeApplication {
  std::string name;
  int x = 1;
  int y = 1;
  std::optional<int> z;
  std::optional<Color> color;
  std::optional<PartKind> part;
  std::optional<SizeOverride> size;
};

/// The recall sentence for an application: "Build another C15 at the 9th
/// column, 8th row in green."
std::string recall_sentence(const ShapeApplication &app);

using BackendFactory = std::function<Result<std::shared_ptr<llm::Backend>>(const llm::BackendConfig &)>;

class SessionManager {
public:
  /// Loads the shape library when configured. Sessions created through this
  /// manager log under config.data_dir/sessions/.
  static Result<std::unique_ptr<SessionManager>> open(ServiceConfig config, BackendFactory factory = {});

  ~SessionManager();

  /// overrides may carry "backend" and "shape_library" keys.
  Result<std::string> create_session(const nlohmann::json &overrides = nlohmann::json::object());

  /// SessionBusy while another turn runs or a question is open.
  Result<agent::TurnOutcome> post_instruction(const std::string &id, std::string_view text);
  /// InvalidArgument when no question is open.
  Result<agent::TurnOutcome> post_answer(const std::string &id, std::string_view text);
  Status cancel(const std::string &id);
  Result<agent::TurnOutcome> apply_shape(const std::string &id, const ShapeApplication &app);

  /// {"id","created_at","backend","awaiting_answer","pending","grid":[...],
  ///  "dialogue":[...],"shapes":[...]}. Taken between turns.
  Result<nlohmann::ordered_json> get_state(const std::string &id) const;

  /// Events with seq > after, waiting up to timeout for one to arrive.
  Result<std::vector<Event>> events_since(const std::string &id, std::uint64_t after,
                                          std::chrono::milliseconds timeout) const;

  /// Shapes in a session's memory, or in the configured library.
  Result<std::vector<std::string>> shapes(const std::optional<std::string> &id) const;
  std::vector<std::string> session_ids() const;

  /// Replays every persisted session log. Sessions whose logs do not replay
  /// are skipped and reported.
  std::vector<Error> recover();

  const ServiceConfig &config() const { return config_; }
  std::filesystem::path log_path(const std::string &id) const;

private:
  struct Session;

  SessionManager(ServiceConfig config, std::shared_ptr<const memory::ShapeStore> library, BackendFactory factory);
  Result<std::shared_ptr<Session>> find(const std::string &id) const;
  Result<agent::TurnOutcome> run_turn(const std::shared_ptr<Session> &s, std::string_view text, bool answer);
  std::string fresh_id();

  ServiceConfig config_;
  std::shared_ptr<const memory::ShapeStore> library_;
  BackendFactory factory_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Final grid of a dialogue log replayed with the given backend; a sibling
/// <log>.meta.json supplies the shape library when present.
Result<GridState> replay_log(const std::filesystem::path &log, const llm::BackendConfig &backend = {});

} // namespace blockwright::service
