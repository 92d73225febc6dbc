#include "blockwright/service/session.hpp"

#include <ctime>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "blockwright/grammar/generator.hpp"
#include "blockwright/grid/wire.hpp"

namespace blockwright::service {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string now_iso() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

Result<std::string> read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return make_error(Errc::Io, "cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Error bad_config(const std::string &message) { return make_error(Errc::BadConfig, message); }

Result<std::shared_ptr<memory::ShapeStore>> library_copy(const std::optional<std::filesystem::path> &path) {
  if (!path) return std::make_shared<memory::ShapeStore>();
  auto store = memory::ShapeStore::load(*path);
  if (!store) return bad_config("shape library " + path->string() + ": " + store.error().message);
  return std::make_shared<memory::ShapeStore>(store.value());
}

std::filesystem::path meta_path_for(const std::filesystem::path &log) {
  auto p = log;
  p.replace_extension(".meta.json");
  return p;
}

} // namespace

Status ServiceConfig::validate() const {
  if (auto s = backend.validate(); !s) return bad_config(s.error().message);
  if (shape_library && !std::filesystem::exists(*shape_library)) {
    return bad_config("shape library not found: " + shape_library->string());
  }
  if (data_dir.empty()) return bad_config("data_dir is empty");
  return {};
}

Result<ServiceConfig> ServiceConfig::from_json(const json &j, const std::filesystem::path &base) {
  if (!j.is_object()) return bad_config("config must be a JSON object");
  ServiceConfig c;
  auto resolve = [&base](const std::string &p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
  };
  try {
    if (j.contains("backend")) {
      auto b = llm::BackendConfig::from_json(j.at("backend"));
      if (!b) return bad_config(b.error().message);
      c.backend = std::move(b).value();
      if (!c.backend.replay_path.empty()) c.backend.replay_path = resolve(c.backend.replay_path).string();
    }
    if (j.contains("shape_library") && !j.at("shape_library").is_null()) {
      c.shape_library = resolve(j.at("shape_library").get<std::string>());
    }
    if (j.contains("data_dir")) c.data_dir = resolve(j.at("data_dir").get<std::string>());
  } catch (const json::exception &e) {
    return bad_config(std::string("bad config value: ") + e.what());
  }
  if (auto s = c.validate(); !s) return s.error();
  return c;
}

Result<ServiceConfig> ServiceConfig::load(const std::filesystem::path &path) {
  auto text = read_file(path);
  if (!text) return bad_config("config file not found: " + path.string());
  json j;
  try {
    j = json::parse(text.value());
  } catch (const json::exception &e) {
    return bad_config("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j, path.parent_path());
}

ordered_json ServiceConfig::to_json() const {
  ordered_json j{{"backend", backend.to_json()}};
  j["shape_library"] = shape_library ? ordered_json(shape_library->string()) : ordered_json();
  j["data_dir"] = data_dir.string();
  return j;
}

std::string recall_sentence(const ShapeApplication &app) {
  RecallCommand r;
  r.name = app.name;
  r.target.x = app.x;
  r.target.y = app.y;
  r.target.z = app.z;
  r.color = app.color;
  r.part = app.part;
  r.size = app.size;
  return grammar::render(ParsedItem{MemoryCommand{r}});
}

struct SessionManager::Session {
  std::string id;
  std::string created_at;
  llm::BackendConfig backend;
  std::optional<std::filesystem::path> library;
  std::filesystem::path log;
  std::unique_ptr<agent::Agent> agent;

  std::mutex turn;             // held while a turn runs
  std::size_t logged = 0;      // dialogue entries already on disk

  mutable std::mutex state;    // guards everything below
  mutable std::condition_variable changed;
  ordered_json snapshot;
  std::vector<Event> events;

  void push(std::string type, ordered_json data) {
    {
      std::lock_guard lock(state);
      events.push_back({events.size() + 1, std::move(type), std::move(data)});
    }
    changed.notify_all();
  }

  // Caller holds `turn`.
  void publish() {
    ordered_json j{{"id", id}, {"created_at", created_at}, {"backend", std::string(kind_name(backend.kind))}};
    j["awaiting_answer"] = agent->awaiting_answer();
    if (auto q = agent->pending_question()) {
      j["pending"] = agent::outcome_to_json(*q);
    } else {
      j["pending"] = nullptr;
    }
    j["grid"] = wire::snapshot(agent->grid());
    ordered_json dialogue = ordered_json::array();
    for (const auto &e : agent->dialogue()) dialogue.push_back(agent::dialogue_entry_to_json(e));
    j["dialogue"] = std::move(dialogue);
    j["shapes"] = agent->shapes().names();
    std::lock_guard lock(state);
    snapshot = std::move(j);
  }

  Status append_log() {
    const auto &entries = agent->dialogue();
    std::ofstream out(log, std::ios::app | std::ios::binary);
    if (!out) return make_error(Errc::Io, "cannot append to " + log.string());
    for (; logged < entries.size(); ++logged) out << agent::dialogue_entry_to_json(entries[logged]).dump() << "\n";
    out.flush();
    if (!out) return make_error(Errc::Io, "cannot append to " + log.string());
    return {};
  }
};

SessionManager::SessionManager(ServiceConfig config, std::shared_ptr<const memory::ShapeStore> library,
                               BackendFactory factory)
    : config_(std::move(config)), library_(std::move(library)), factory_(std::move(factory)) {
  if (!factory_) factory_ = [](const llm::BackendConfig &c) { return llm::make_backend(c); };
}

SessionManager::~SessionManager() = default;

Result<std::unique_ptr<SessionManager>> SessionManager::open(ServiceConfig config, BackendFactory factory) {
  if (auto s = config.validate(); !s) return s.error();
  auto library = library_copy(config.shape_library);
  if (!library) return library.error();
  std::error_code ec;
  std::filesystem::create_directories(config.data_dir / "sessions", ec);
  if (ec) return bad_config("cannot create " + (config.data_dir / "sessions").string() + ": " + ec.message());
  return std::unique_ptr<SessionManager>(
      new SessionManager(std::move(config), std::move(library).value(), std::move(factory)));
}

std::filesystem::path SessionManager::log_path(const std::string &id) const {
  return config_.data_dir / "sessions" / (id + ".jsonl");
}

std::string SessionManager::fresh_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  for (;;) {
    std::ostringstream s;
    s << std::hex << std::setfill('0') << std::setw(16) << rng();
    const std::string id = s.str();
    if (!sessions_.count(id) && !std::filesystem::exists(log_path(id))) return id;
  }
}

Result<std::string> SessionManager::create_session(const json &overrides) {
  if (!overrides.is_object()) return bad_config("session options must be a JSON object");
  llm::BackendConfig backend = config_.backend;
  std::optional<std::filesystem::path> library = config_.shape_library;
  try {
    if (overrides.contains("backend")) {
      json merged = backend.to_json();
      merged.update(overrides.at("backend"));
      auto b = llm::BackendConfig::from_json(merged);
      if (!b) return bad_config(b.error().message);
      backend = std::move(b).value();
    }
    if (overrides.contains("shape_library")) {
      const auto &v = overrides.at("shape_library");
      library = v.is_null() ? std::nullopt : std::optional<std::filesystem::path>(v.get<std::string>());
    }
  } catch (const json::exception &e) {
    return bad_config(std::string("bad session option: ") + e.what());
  }
  if (auto s = backend.validate(); !s) return bad_config(s.error().message);
  if (library && !std::filesystem::exists(*library)) return bad_config("shape library not found: " + library->string());

  auto shapes = library == config_.shape_library ? Result<std::shared_ptr<memory::ShapeStore>>(
                                                       std::make_shared<memory::ShapeStore>(*library_))
                                                 : library_copy(library);
  if (!shapes) return shapes.error();
  auto model = factory_(backend);
  if (!model) return bad_config(model.error().message);

  auto s = std::make_shared<Session>();
  s->created_at = now_iso();
  s->backend = backend;
  s->library = library;
  s->agent = std::make_unique<agent::Agent>(std::move(model).value(), std::move(shapes).value());

  std::lock_guard lock(mutex_);
  s->id = fresh_id();
  s->log = log_path(s->id);
  ordered_json meta{{"id", s->id}, {"created_at", s->created_at}, {"backend", backend.to_json()}};
  meta["shape_library"] = library ? ordered_json(std::filesystem::absolute(*library).string()) : ordered_json();
  {
    std::ofstream m(meta_path_for(s->log));
    m << meta.dump(2) << "\n";
    std::ofstream log(s->log, std::ios::app);
    if (!m || !log) return make_error(Errc::Io, "cannot write session files under " + s->log.parent_path().string());
  }
  s->publish();
  sessions_[s->id] = s;
  return s->id;
}

Result<std::shared_ptr<SessionManager::Session>> SessionManager::find(const std::string &id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return make_error(Errc::SessionNotFound, "no session " + id);
  return it->second;
}

Result<agent::TurnOutcome> SessionManager::run_turn(const std::shared_ptr<Session> &s, std::string_view text,
                                                    bool answer) {
  std::unique_lock turn(s->turn, std::try_to_lock);
  if (!turn.owns_lock()) return make_error(Errc::SessionBusy, "session " + s->id + " is running a turn");
  const bool waiting = s->agent->awaiting_answer();
  if (!answer && waiting) {
    return make_error(Errc::SessionBusy, "session " + s->id + " is waiting for an answer");
  }
  if (answer && !waiting) return make_error(Errc::InvalidArgument, "no question is waiting for an answer");

  if (answer) {
    s->push("answer", {{"text", std::string(text)}, {"question", s->agent->pending_question()->id}});
  } else {
    s->push("instruction", {{"text", std::string(text)}});
  }
  agent::TurnOutcome outcome = s->agent->process_turn(text);
  auto logged = s->append_log();
  s->publish();

  ordered_json data = agent::outcome_to_json(outcome);
  std::string type = data["type"];
  if (type == "execute") {
    type = "grid";
    std::lock_guard lock(s->state);
    data["grid"] = s->snapshot["grid"];
  } else if (type == "stored") {
    std::lock_guard lock(s->state);
    data["shapes"] = s->snapshot["shapes"];
  }
  s->push(type, std::move(data));
  if (!logged) return logged.error();
  return outcome;
}

Result<agent::TurnOutcome> SessionManager::post_instruction(const std::string &id, std::string_view text) {
  auto s = find(id);
  if (!s) return s.error();
  return run_turn(s.value(), text, false);
}

Result<agent::TurnOutcome> SessionManager::post_answer(const std::string &id, std::string_view text) {
  auto s = find(id);
  if (!s) return s.error();
  return run_turn(s.value(), text, true);
}

Status SessionManager::cancel(const std::string &id) {
  auto found = find(id);
  if (!found) return found.error();
  const auto &s = found.value();
  std::unique_lock turn(s->turn, std::try_to_lock);
  if (!turn.owns_lock()) return make_error(Errc::SessionBusy, "session " + id + " is running a turn");
  if (!s->agent->awaiting_answer()) return make_error(Errc::InvalidArgument, "no question is waiting for an answer");
  s->agent->cancel_turn();
  auto logged = s->append_log();
  s->publish();
  s->push("cancel", ordered_json::object());
  return logged;
}

Result<agent::TurnOutcome> SessionManager::apply_shape(const std::string &id, const ShapeApplication &app) {
  auto s = find(id);
  if (!s) return s.error();
  if (!s.value()->agent->shapes().contains(app.name)) {
    return make_error(Errc::UnknownShape, "no shape called " + app.name);
  }
  return run_turn(s.value(), recall_sentence(app), false);
}

Result<ordered_json> SessionManager::get_state(const std::string &id) const {
  auto s = find(id);
  if (!s) return s.error();
  std::lock_guard lock(s.value()->state);
  return s.value()->snapshot;
}

Result<std::vector<Event>> SessionManager::events_since(const std::string &id, std::uint64_t after,
                                                        std::chrono::milliseconds timeout) const {
  auto found = find(id);
  if (!found) return found.error();
  const auto &s = found.value();
  std::unique_lock lock(s->state);
  s->changed.wait_for(lock, timeout, [&] { return s->events.size() > after; });
  std::vector<Event> out;
  for (std::size_t i = after; i < s->events.size(); ++i) out.push_back(s->events[i]);
  return out;
}

Result<std::vector<std::string>> SessionManager::shapes(const std::optional<std::string> &id) const {
  if (!id) return library_->names();
  auto s = find(*id);
  if (!s) return s.error();
  std::lock_guard lock(s.value()->state);
  return s.value()->snapshot["shapes"].get<std::vector<std::string>>();
}

std::vector<std::string> SessionManager::session_ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto &[id, s] : sessions_) out.push_back(id);
  return out;
}

std::vector<Error> SessionManager::recover() {
  std::vector<Error> errors;
  std::vector<std::filesystem::path> logs;
  std::error_code ec;
  for (const auto &entry : std::filesystem::directory_iterator(config_.data_dir / "sessions", ec)) {
    if (entry.path().extension() == ".jsonl") logs.push_back(entry.path());
  }
  std::sort(logs.begin(), logs.end());
  for (const auto &log : logs) {
    const std::string id = log.stem().string();
    {
      std::lock_guard lock(mutex_);
      if (sessions_.count(id)) continue;
    }
    auto meta_text = read_file(meta_path_for(log));
    if (!meta_text) {
      errors.push_back(make_error(Errc::CorruptLog, "session " + id + " has no metadata"));
      continue;
    }
    auto s = std::make_shared<Session>();
    s->id = id;
    s->log = log;
    try {
      const json meta = json::parse(meta_text.value());
      s->created_at = meta.value("created_at", "");
      auto b = llm::BackendConfig::from_json(meta.at("backend"));
      if (!b) {
        errors.push_back(b.error());
        continue;
      }
      s->backend = std::move(b).value();
      if (!meta.at("shape_library").is_null()) s->library = meta.at("shape_library").get<std::string>();
    } catch (const json::exception &e) {
      errors.push_back(make_error(Errc::CorruptLog, "session " + id + " metadata: " + e.what()));
      continue;
    }
    auto shapes = library_copy(s->library);
    auto model = factory_(s->backend);
    auto text = read_file(log);
    if (!shapes || !model || !text) {
      errors.push_back(!shapes ? shapes.error() : !model ? model.error() : text.error());
      continue;
    }
    auto replayed = agent::replay_dialogue(text.value(), std::move(model).value(), std::move(shapes).value());
    if (!replayed) {
      Error e = replayed.error();
      e.message = "session " + id + ": " + e.message;
      errors.push_back(std::move(e));
      continue;
    }
    s->agent = std::move(replayed).value();
    s->logged = s->agent->dialogue().size();
    s->publish();
    std::lock_guard lock(mutex_);
    sessions_[id] = s;
  }
  return errors;
}

Result<GridState> replay_log(const std::filesystem::path &log, const llm::BackendConfig &backend) {
  auto text = read_file(log);
  if (!text) return text.error();
  std::optional<std::filesystem::path> library;
  if (auto meta = read_file(meta_path_for(log))) {
    try {
      const json j = json::parse(meta.value());
      if (j.contains("shape_library") && !j["shape_library"].is_null()) library = j["shape_library"].get<std::string>();
    } catch (const json::exception &e) {
      return make_error(Errc::CorruptLog, "metadata for " + log.string() + ": " + e.what());
    }
  }
  auto shapes = library_copy(library);
  if (!shapes) return shapes.error();
  auto model = llm::make_backend(backend);
  if (!model) return model.error();
  auto agent = agent::replay_dialogue(text.value(), std::move(model).value(), std::move(shapes).value());
  if (!agent) return agent.error();
  return agent.value()->grid();
}

} // namespace blockwright::service
