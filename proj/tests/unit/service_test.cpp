#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <future>
#include <thread>

#include <httplib.h>

#include "blockwright/eval/datasets.hpp"
#include "blockwright/grid/wire.hpp"
#include "blockwright/service/server.hpp"
#include "blockwright/service/session.hpp"

using namespace blockwright;
using namespace blockwright::service;
using nlohmann::json;

namespace {

class TempDir {
public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("blockwright_service_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path &path() const { return path_; }

private:
  std::filesystem::path path_;
};

ServiceConfig config_in(const TempDir &dir) {
  ServiceConfig c;
  c.data_dir = dir.path() / "data";
  return c;
}

std::unique_ptr<SessionManager> open_manager(const ServiceConfig &c, BackendFactory f = {}) {
  auto m = SessionManager::open(c, std::move(f));
  EXPECT_TRUE(m.ok()) << m.error().to_string();
  return std::move(m).value();
}

std::vector<std::string> c15_turns() {
  auto cases = eval::generate_dataset(eval::TaskId::V, 0).value();
  for (const auto &c : cases) {
    if (c.id == "C15") return c.turns;
  }
  return {};
}

template <typename T>
bool is(const Result<agent::TurnOutcome> &r) {
  return r.ok() && std::holds_alternative<T>(r.value());
}

// Blocks parser calls until released.
class GateBackend final : public llm::Backend {
public:
  Result<std::string> complete(const llm::AgentPrompt &prompt, const std::vector<llm::Message> &messages) override {
    entered.set_value();
    release.get_future().wait();
    return inner_.complete(prompt, messages);
  }
  std::string_view kind() const override { return "gate"; }

  std::promise<void> entered;
  std::promise<void> release;

private:
  llm::DeterministicBackend inner_;
};

} // namespace

TEST(ServiceConfig, DefaultsAreValid) {
  TempDir dir;
  EXPECT_TRUE(config_in(dir).validate().ok());
}

TEST(ServiceConfig, MissingShapeLibraryIsBadConfig) {
  TempDir dir;
  auto c = config_in(dir);
  c.shape_library = dir.path() / "nope.json";
  auto m = SessionManager::open(c);
  ASSERT_FALSE(m.ok());
  EXPECT_EQ(m.error().code, Errc::BadConfig);

  auto parsed = ServiceConfig::from_json(json{{"shape_library", "nope.json"}}, dir.path());
  ASSERT_FALSE(parsed.ok());
  EXPECT_EQ(parsed.error().code, Errc::BadConfig);
}

TEST(ServiceConfig, LoadResolvesRelativePaths) {
  TempDir dir;
  memory::ShapeStore empty;
  ASSERT_TRUE(empty.save(dir.path() / "shapes.json").ok());
  std::ofstream(dir.path() / "service.json")
      << R"({"backend":{"kind":"deterministic"},"shape_library":"shapes.json","data_dir":"d"})";
  auto c = ServiceConfig::load(dir.path() / "service.json");
  ASSERT_TRUE(c.ok()) << c.error().to_string();
  EXPECT_EQ(c.value().data_dir, dir.path() / "d");
  EXPECT_EQ(*c.value().shape_library, dir.path() / "shapes.json");

  auto missing = ServiceConfig::load(dir.path() / "absent.json");
  ASSERT_FALSE(missing.ok());
  EXPECT_EQ(missing.error().code, Errc::BadConfig);
  std::ofstream(dir.path() / "bad.json") << R"({"backend":{"kind":"remote","timeout_seconds":-1}})";
  EXPECT_EQ(ServiceConfig::load(dir.path() / "bad.json").error().code, Errc::BadConfig);
}

TEST(Sessions, CreateGivesDistinctIdsAndEmptyGrids) {
  TempDir dir;
  auto m = open_manager(config_in(dir));
  auto a = m->create_session();
  auto b = m->create_session();
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_NE(a.value(), b.value());
  auto state = m->get_state(a.value());
  ASSERT_TRUE(state.ok());
  EXPECT_TRUE(state.value()["grid"].empty());
  EXPECT_FALSE(state.value()["awaiting_answer"].get<bool>());
  EXPECT_TRUE(std::filesystem::exists(m->log_path(a.value())));
}

TEST(Sessions, SessionOptionsAreValidated) {
  TempDir dir;
  auto m = open_manager(config_in(dir));
  auto bad = m->create_session(json{{"shape_library", (dir.path() / "missing.json").string()}});
  ASSERT_FALSE(bad.ok());
  EXPECT_EQ(bad.error().code, Errc::BadConfig);
  EXPECT_EQ(m->create_session(json{{"backend", {{"max_retries", 99}}}}).error().code, Errc::BadConfig);
}

TEST(Sessions, UnknownIdIsNotFound) {
  TempDir dir;
  auto m = open_manager(config_in(dir));
  EXPECT_EQ(m->get_state("missing").error().code, Errc::SessionNotFound);
  EXPECT_EQ(m->post_instruction("missing", "Place a red nut.").error().code, Errc::SessionNotFound);
  EXPECT_EQ(m->post_answer("missing", "red").error().code, Errc::SessionNotFound);
  EXPECT_EQ(m->events_since("missing", 0, std::chrono::milliseconds(0)).error().code, Errc::SessionNotFound);
  EXPECT_EQ(m->shapes(std::string("missing")).error().code, Errc::SessionNotFound);
}

TEST(Sessions, ExecuteAndClarifyFlow) {
  TempDir dir;
  auto m = open_manager(config_in(dir));
  const auto id = m->create_session().value();

  EXPECT_TRUE(is<agent::Execute>(m->post_instruction(id, "Place a blue screw at the 5th column, 4th row.")));
  auto q = m->post_instruction(id, "Place a red nut.");
  ASSERT_TRUE(is<agent::Clarify>(q));
  EXPECT_FALSE(std::get<agent::Clarify>(q.value()).id.empty());

  // The grid does not move while the question is open.
  auto during = m->get_state(id).value();
  EXPECT_EQ(during["grid"].size(), 1u);
  EXPECT_TRUE(during["awaiting_answer"].get<bool>());
  EXPECT_EQ(during["pending"]["field"], "x");

  auto busy = m->post_instruction(id, "Place a green washer at the 1st column, 1st row.");
  ASSERT_FALSE(busy.ok());
  EXPECT_EQ(busy.error().code, Errc::SessionBusy);

  EXPECT_TRUE(is<agent::Clarify>(m->post_answer(id, "the 2nd column")));
  EXPECT_TRUE(is<agent::Execute>(m->post_answer(id, "the 3rd row")));
  EXPECT_EQ(m->post_answer(id, "red").error().code, Errc::InvalidArgument);
  EXPECT_TRUE(is<agent::Execute>(m->post_instruction(id, "Place a green washer at the 1st column, 1st row.")));

  auto state = m->get_state(id).value();
  EXPECT_EQ(state["grid"].size(), 3u);
  EXPECT_EQ(state["grid"][1]["x"], 2);
  EXPECT_EQ(state["grid"][1]["y"], 3);
}

TEST(Sessions, CancelDropsTheOpenQuestion) {
  TempDir dir;
  auto m = open_manager(config_in(dir));
  const auto id = m->create_session().value();
  EXPECT_EQ(m->cancel(id).error().code, Errc::InvalidArgument);
  ASSERT_TRUE(is<agent::Clarify>(m->post_instruction(id, "Place a nut at the 1st column, 1st row.")));
  ASSERT_TRUE(m->cancel(id).ok());
  EXPECT_FALSE(m->get_state(id).value()["awaiting_answer"].get<bool>());
  EXPECT_TRUE(is<agent::Execute>(m->post_instruction(id, "Place a red nut at the 1st column, 1st row.")));
  auto replayed = replay_log(m->log_path(id));
  ASSERT_TRUE(replayed.ok()) << replayed.error().to_string();
  EXPECT_EQ(wire::snapshot(replayed.value()), m->get_state(id).value()["grid"]);
}

TEST(Sessions, EventsFollowTurnOrder) {
  TempDir dir;
  auto m = open_manager(config_in(dir));
  const auto id = m->create_session().value();
  (void)m->post_instruction(id, "Place a red nut.");
  (void)m->post_answer(id, "the 4th column");
  (void)m->post_answer(id, "the 4th row");
  (void)m->post_instruction(id, "Dance a jig.");
  auto events = m->events_since(id, 0, std::chrono::milliseconds(0)).value();
  std::vector<std::string> types;
  for (const auto &e : events) types.push_back(e.type);
  EXPECT_EQ(types, (std::vector<std::string>{"instruction", "clarify", "answer", "clarify", "answer", "grid",
                                             "instruction", "error"}));
  for (std::size_t i = 0; i < events.size(); ++i) EXPECT_EQ(events[i].seq, i + 1);
  EXPECT_EQ(events[5].data["grid"].size(), 1u);
  EXPECT_EQ(m->events_since(id, 6, std::chrono::milliseconds(0)).value().size(), 2u);
}

TEST(Sessions, WaitingSubscriberWakesOnNewEvent) {
  TempDir dir;
  auto m = open_manager(config_in(dir));
  const auto id = m->create_session().value();
  auto waiter = std::async(std::launch::async, [&] { return m->events_since(id, 0, std::chrono::seconds(10)); });
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  (void)m->post_instruction(id, "Place a red nut at the 1st column, 1st row.");
  auto got = waiter.get();
  ASSERT_TRUE(got.ok());
  ASSERT_FALSE(got.value().empty());
  EXPECT_EQ(got.value().front().type, "instruction");
}

TEST(Sessions, OneTurnInFlightAndNoTornReads) {
  TempDir dir;
  auto gate = std::make_shared<GateBackend>();
  auto m = open_manager(config_in(dir), [gate](const llm::BackendConfig &) {
    return Result<std::shared_ptr<llm::Backend>>(std::shared_ptr<llm::Backend>(gate));
  });
  const auto id = m->create_session().value();
  auto turn = std::async(std::launch::async,
                         [&] { return m->post_instruction(id, "Place a red nut at the 1st column, 1st row."); });
  gate->entered.get_future().wait();

  auto busy = m->post_instruction(id, "Place a blue nut at the 2nd column, 1st row.");
  ASSERT_FALSE(busy.ok());
  EXPECT_EQ(busy.error().code, Errc::SessionBusy);
  // Mid-turn state is the pre-turn snapshot.
  auto mid = m->get_state(id);
  ASSERT_TRUE(mid.ok());
  EXPECT_TRUE(mid.value()["grid"].empty());
  EXPECT_TRUE(mid.value()["dialogue"].empty());

  gate->release.set_value();
  EXPECT_TRUE(is<agent::Execute>(turn.get()));
  EXPECT_EQ(m->get_state(id).value()["grid"].size(), 1u);
}

TEST(Sessions, ManySessionsRunConcurrently) {
  TempDir dir;
  auto m = open_manager(config_in(dir));
  std::vector<std::string> ids;
  for (int i = 0; i < 8; ++i) ids.push_back(m->create_session().value());
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      for (int k = 1; k <= 5; ++k) {
        (void)m->post_instruction(ids[i], "Place a red nut at the " + std::to_string(k) + "th column, " +
                                              std::to_string(i + 1) + "th row.");
      }
    });
  }
  for (auto &t : threads) t.join();
  for (const auto &id : ids) EXPECT_EQ(m->get_state(id).value()["grid"].size(), 5u) << id;
}

TEST(Sessions, ApplyShapeRendersARecall) {
  TempDir dir;
  auto m = open_manager(config_in(dir));
  const auto id = m->create_session().value();
  const auto turns = c15_turns();
  ASSERT_GE(turns.size(), 5u);
  for (std::size_t i = 0; i + 1 < turns.size(); ++i) {
    auto r = m->post_instruction(id, turns[i]);
    ASSERT_TRUE(r.ok()) << turns[i];
  }
  EXPECT_EQ(m->shapes(id).value(), std::vector<std::string>{"C15"});
  EXPECT_TRUE(m->shapes(std::nullopt).value().empty());

  ShapeApplication app{"C15", 9, 8, std::nullopt, Color::Green, std::nullopt, std::nullopt};
  EXPECT_EQ(recall_sentence(app), "Build another C15 at the 9th column, 8th row in green.");
  ASSERT_TRUE(is<agent::Execute>(m->apply_shape(id, app)));
  auto grid = m->get_state(id).value()["grid"];
  ASSERT_EQ(grid.size(), 14u);
  for (std::size_t i = 7; i < 14; ++i) EXPECT_EQ(grid[i]["color"], "green");

  app.name = "Nothing";
  EXPECT_EQ(m->apply_shape(id, app).error().code, Errc::UnknownShape);
  // C15 at the far corner runs off the board.
  auto off = m->apply_shape(id, {"C15", 16, 16, std::nullopt, std::nullopt, std::nullopt, std::nullopt});
  ASSERT_TRUE(off.ok());
  ASSERT_TRUE(std::holds_alternative<agent::Failed>(off.value()));
  EXPECT_EQ(std::get<agent::Failed>(off.value()).error.code, Errc::OutOfBounds);
}

TEST(Sessions, SharedLibrarySeedsEverySession) {
  TempDir dir;
  std::string lib;
  {
    auto m = open_manager(config_in(dir));
    const auto id = m->create_session().value();
    const auto turns = c15_turns();
    for (std::size_t i = 0; i + 1 < turns.size(); ++i) (void)m->post_instruction(id, turns[i]);
    auto agent = agent::replay_dialogue(
        [&] {
          std::ifstream in(m->log_path(id));
          return std::string((std::istreambuf_iterator<char>(in)), {});
        }(),
        std::make_shared<llm::DeterministicBackend>(), std::make_shared<memory::ShapeStore>());
    ASSERT_TRUE(agent.ok());
    lib = (dir.path() / "library.json").string();
    ASSERT_TRUE(agent.value()->shapes().save(lib).ok());
  }
  auto c = config_in(dir);
  c.shape_library = lib;
  auto m = open_manager(c);
  EXPECT_EQ(m->shapes(std::nullopt).value(), std::vector<std::string>{"C15"});
  const auto a = m->create_session().value();
  const auto b = m->create_session().value();
  EXPECT_EQ(m->shapes(a).value(), std::vector<std::string>{"C15"});
  ASSERT_TRUE(is<agent::Execute>(m->apply_shape(a, {"C15", 3, 3, std::nullopt, std::nullopt, std::nullopt, std::nullopt})));
  EXPECT_EQ(m->get_state(a).value()["grid"].size(), 7u);
  EXPECT_EQ(m->get_state(b).value()["grid"].size(), 0u);
  // Replaying the log of a library-seeded session needs the library too.
  auto replayed = replay_log(m->log_path(a));
  ASSERT_TRUE(replayed.ok()) << replayed.error().to_string();
  EXPECT_EQ(replayed.value().size(), 7u);
}

TEST(Replay, SampleDialogueReproducesTheGrid) {
  TempDir dir;
  auto m = open_manager(config_in(dir));
  const auto id = m->create_session().value();
  for (const auto &t : c15_turns()) ASSERT_TRUE(m->post_instruction(id, t).ok()) << t;
  auto replayed = replay_log(m->log_path(id));
  ASSERT_TRUE(replayed.ok()) << replayed.error().to_string();
  EXPECT_EQ(replayed.value().size(), 14u);
  EXPECT_EQ(wire::snapshot_string(replayed.value()), m->get_state(id).value()["grid"].dump());
}

TEST(Replay, EmptyAndTruncatedLogs) {
  TempDir dir;
  std::ofstream(dir.path() / "empty.jsonl");
  auto empty = replay_log(dir.path() / "empty.jsonl");
  ASSERT_TRUE(empty.ok());
  EXPECT_TRUE(empty.value().empty());

  std::ofstream(dir.path() / "cut.jsonl")
      << R"({"role":"architect","text":"Place a red nut at the 1st column, 1st row.","outcome":null})" << "\n"
      << R"({"role":"system","text":"Placed 1 part.","outc)";
  auto cut = replay_log(dir.path() / "cut.jsonl");
  ASSERT_FALSE(cut.ok());
  EXPECT_EQ(cut.error().code, Errc::CorruptLog);
  EXPECT_EQ(cut.error().detail, 2);

  EXPECT_EQ(replay_log(dir.path() / "absent.jsonl").error().code, Errc::Io);
}

TEST(Recovery, RestartReproducesEverySession) {
  TempDir dir;
  std::map<std::string, nlohmann::ordered_json> before;
  {
    auto m = open_manager(config_in(dir));
    const auto a = m->create_session().value();
    const auto b = m->create_session().value();
    const auto c = m->create_session().value();
    for (const auto &t : c15_turns()) (void)m->post_instruction(a, t);
    (void)m->post_instruction(b, "Place a red nut at the 3rd column, 3rd row.");
    (void)m->post_instruction(b, "Place a washer on top of it.");
    (void)m->post_answer(b, "blue");
    (void)m->post_instruction(c, "Place a green bolt.");
    for (const auto &id : {a, b, c}) before[id] = m->get_state(id).value();
  }
  auto m = open_manager(config_in(dir));
  EXPECT_TRUE(m->recover().empty());
  ASSERT_EQ(m->session_ids().size(), 3u);
  for (const auto &[id, state] : before) {
    auto after = m->get_state(id).value();
    EXPECT_EQ(after["grid"], state["grid"]) << id;
    EXPECT_EQ(after["dialogue"], state["dialogue"]) << id;
    EXPECT_EQ(after["awaiting_answer"], state["awaiting_answer"]) << id;
    EXPECT_EQ(after["shapes"], state["shapes"]) << id;
  }
  // The recovered open question can still be answered, and the log keeps growing.
  const auto open = std::find_if(before.begin(), before.end(),
                                 [](const auto &kv) { return kv.second["awaiting_answer"].template get<bool>(); });
  ASSERT_NE(open, before.end());
  EXPECT_TRUE(is<agent::Clarify>(m->post_answer(open->first, "the 9th column")));
  EXPECT_TRUE(is<agent::Execute>(m->post_answer(open->first, "the 9th row")));
  auto replayed = replay_log(m->log_path(open->first));
  ASSERT_TRUE(replayed.ok());
  EXPECT_EQ(replayed.value().size(), 1u);
}

TEST(Recovery, CorruptLogIsSkippedAndReported) {
  TempDir dir;
  std::string id;
  {
    auto m = open_manager(config_in(dir));
    id = m->create_session().value();
    (void)m->post_instruction(id, "Place a red nut at the 3rd column, 3rd row.");
    std::ofstream(m->log_path(id), std::ios::app) << "{not json";
  }
  auto m = open_manager(config_in(dir));
  auto errors = m->recover();
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0].code, Errc::CorruptLog);
  EXPECT_EQ(errors[0].detail, 3);
  EXPECT_TRUE(m->session_ids().empty());
}

class HttpFixture : public ::testing::Test {
protected:
  void SetUp() override {
    manager_ = open_manager(config_in(dir_));
    server_ = std::make_unique<HttpServer>(*manager_);
    port_ = server_->bind("127.0.0.1", 0);
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_->run(); });
    for (int i = 0; i < 200 && !server_->running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(5, 0);
  }
  void TearDown() override {
    server_->stop();
    thread_.join();
  }

  std::pair<int, json> post(const std::string &path, const json &body) {
    auto r = client_->Post(path, body.dump(), "application/json");
    if (!r) return {0, {}};
    return {r->status, r->body.empty() ? json() : json::parse(r->body)};
  }
  std::pair<int, json> get(const std::string &path) {
    auto r = client_->Get(path);
    if (!r) return {0, {}};
    return {r->status, json::parse(r->body)};
  }

  TempDir dir_;
  std::unique_ptr<SessionManager> manager_;
  std::unique_ptr<HttpServer> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpFixture, FullDialogueOverHttp) {
  auto [code, created] = post("/sessions", json::object());
  ASSERT_EQ(code, 201);
  const std::string id = created["id"];
  EXPECT_TRUE(created["state"]["grid"].empty());

  auto [c1, placed] = post("/sessions/" + id + "/instruction", {{"text", "Place a blue screw at the 5th column, 4th row."}});
  EXPECT_EQ(c1, 200);
  EXPECT_EQ(placed["outcome"]["type"], "execute");
  EXPECT_EQ(placed["outcome"]["program"]["actions"][0]["x"], 5);

  auto [c2, asked] = post("/sessions/" + id + "/instruction", {{"text", "Place a red screw at the 6th column, 4th row."}});
  EXPECT_EQ(asked["outcome"]["type"], "execute");
  auto [c3, q] = post("/sessions/" + id + "/instruction", {{"text", "Place a washer on top of it."}});
  EXPECT_EQ(q["outcome"]["type"], "clarify");
  EXPECT_EQ(q["outcome"]["field"], "color");
  auto [c4, busy] = post("/sessions/" + id + "/instruction", {{"text", "Place a red nut."}});
  EXPECT_EQ(c4, 409);
  EXPECT_EQ(busy["error"]["code"], "SessionBusy");
  auto [c5, done] = post("/sessions/" + id + "/answer", {{"text", "green"}});
  EXPECT_EQ(done["outcome"]["type"], "execute");

  auto [c6, state] = get("/sessions/" + id + "/state");
  EXPECT_EQ(c6, 200);
  ASSERT_EQ(state["grid"].size(), 3u);
  EXPECT_EQ(state["grid"][2]["z"], 2);
  EXPECT_EQ(state["grid"][2]["color"], "green");

  auto events = client_->Get("/sessions/" + id + "/events?follow=0");
  ASSERT_TRUE(events);
  EXPECT_EQ(events->status, 200);
  EXPECT_NE(events->get_header_value("Content-Type").find("text/event-stream"), std::string::npos);
  EXPECT_NE(events->body.find("id: 1\nevent: instruction\n"), std::string::npos);
  EXPECT_LT(events->body.find("event: clarify"), events->body.find("event: answer"));
  auto later = client_->Get("/sessions/" + id + "/events?follow=0&after=6");
  ASSERT_TRUE(later);
  EXPECT_EQ(later->body.find("id: 6\n"), std::string::npos);
  EXPECT_NE(later->body.find("id: 7\n"), std::string::npos);
}

TEST_F(HttpFixture, FollowedStreamDeliversLiveEvents) {
  const std::string id = post("/sessions", json::object()).second["id"];
  std::string received;
  std::atomic<bool> got_grid{false};
  std::thread reader([&] {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(5, 0);
    c.Get("/sessions/" + id + "/events", [&](const char *data, size_t len) {
      received.append(data, len);
      if (received.find("event: grid") != std::string::npos) {
        got_grid = true;
        return false;
      }
      return true;
    });
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  post("/sessions/" + id + "/instruction", {{"text", "Place a red nut at the 2nd column, 2nd row."}});
  reader.join();
  EXPECT_TRUE(got_grid.load());
  EXPECT_LT(received.find("event: instruction"), received.find("event: grid"));
}

TEST_F(HttpFixture, ErrorsMapToStatusCodes) {
  EXPECT_EQ(get("/sessions/nope/state").first, 404);
  EXPECT_EQ(post("/sessions/nope/instruction", {{"text", "Place a red nut."}}).first, 404);
  const std::string id = post("/sessions", json::object()).second["id"];
  EXPECT_EQ(post("/sessions/" + id + "/instruction", json::object()).first, 400);
  EXPECT_EQ(post("/sessions/" + id + "/answer", {{"text", "red"}}).first, 400);
  auto raw = client_->Post("/sessions/" + id + "/instruction", "{not json", "application/json");
  ASSERT_TRUE(raw);
  EXPECT_EQ(raw->status, 400);
  EXPECT_EQ(post("/sessions", {{"shape_library", "/no/such/file.json"}}).first, 400);
  auto [code, body] = post("/sessions/" + id + "/instruction", {{"text", "Dance a jig."}});
  EXPECT_EQ(code, 200);
  EXPECT_EQ(body["outcome"]["type"], "error");
  EXPECT_EQ(body["outcome"]["code"], "Unparseable");
}

TEST_F(HttpFixture, ShapesListAndApply) {
  const std::string id = post("/sessions", json::object()).second["id"];
  for (const auto &t : c15_turns()) {
    if (t.rfind("Build another", 0) == 0) break;
    EXPECT_EQ(post("/sessions/" + id + "/instruction", {{"text", t}}).first, 200) << t;
  }
  auto [c1, listed] = get("/shapes?session=" + id);
  EXPECT_EQ(c1, 200);
  EXPECT_EQ(listed["shapes"], json::array({"C15"}));
  EXPECT_EQ(get("/shapes").second["shapes"], json::array());

  auto [c2, applied] = post("/shapes/C15/apply", {{"session", id}, {"x", 9}, {"y", 8}, {"color", "green"}});
  EXPECT_EQ(c2, 200);
  EXPECT_EQ(applied["instruction"], "Build another C15 at the 9th column, 8th row in green.");
  EXPECT_EQ(applied["outcome"]["type"], "execute");
  EXPECT_EQ(applied["outcome"]["program"]["actions"].size(), 7u);

  EXPECT_EQ(post("/shapes/Nope/apply", {{"session", id}, {"x", 1}, {"y", 1}}).first, 404);
  EXPECT_EQ(post("/shapes/C15/apply", {{"x", 1}, {"y", 1}}).first, 400);
  EXPECT_EQ(post("/shapes/C15/apply", {{"session", id}, {"x", 1}, {"y", 1}, {"color", "plaid"}}).first, 400);
  auto [c3, off] = post("/shapes/C15/apply", {{"session", id}, {"x", 16}, {"y", 16}});
  EXPECT_EQ(c3, 200);
  EXPECT_EQ(off["outcome"]["code"], "OutOfBounds");
}
