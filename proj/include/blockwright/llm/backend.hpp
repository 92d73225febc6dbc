#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blockwright/common/result.hpp"
#include "blockwright/llm/prompts.hpp"

namespace blockwright::llm {

struct Message {
  std::string role; // "user" or "assistant"
  std::string content;

  bool operator==(const Message &) const = default;
};

struct BackendConfig {
  enum class Kind { Deterministic, Remote, Replay };
  Kind kind = Kind::Deterministic;
  std::string endpoint = "http://127.0.0.1:8000/v1/chat/completions";
  std::string model = "gpt-4.1";
  double timeout_seconds = 30.0;
  int max_retries = 2;
  double temperature = 0.0;
  std::string api_key_env = "BLOCKWRIGHT_API_KEY";
  std::string replay_path; // recorded completions for Kind::Replay

  /// timeout > 0, 0 <= retries <= 5, endpoint parseable for remote.
  Status validate() const;

  /// Missing keys keep their defaults. BLOCKWRIGHT_ENDPOINT and
  /// BLOCKWRIGHT_MODEL, when set, override the file.
  static Result<BackendConfig> from_json(const nlohmann::json &j);
  nlohmann::ordered_json to_json() const;
  void apply_environment();
};

std::string_view kind_name(BackendConfig::Kind kind);

/// Receives request/response records with credentials redacted.
using DebugSink = std::function<void(const nlohmann::ordered_json &)>;

class Backend {
public:
  virtual ~Backend() = default;
  virtual Result<std::string> complete(const AgentPrompt &prompt, const std::vector<Message> &messages) = 0;
  virtual std::string_view kind() const = 0;
};

/// Answers from the instruction grammar. Same input, same bytes.
///   parser     {"structures":[{"plan":<canonical sentence>,"name":..}, ...]}
///   locator    {"instruction":<input unchanged>}
///   cot        place(part, color, row, column, height) lines, or a question
class DeterministicBackend final : public Backend {
public:
  Result<std::string> complete(const AgentPrompt &prompt, const std::vector<Message> &messages) override;
  std::string_view kind() const override { return "deterministic"; }
};

/// Chat-completions over HTTP: {"model","messages","temperature"} in,
/// choices[0].message.content out.
class RemoteBackend final : public Backend {
public:
  explicit RemoteBackend(BackendConfig config, DebugSink sink = {});
  Result<std::string> complete(const AgentPrompt &prompt, const std::vector<Message> &messages) override;
  std::string_view kind() const override { return "remote"; }

private:
  Result<std::string> attempt(const std::string &body);

  BackendConfig config_;
  DebugSink sink_;
  std::string api_key_;
};

/// One recorded completion, keyed by role and the final message.
struct Recording {
  std::string role;
  std::string input;
  std::string output;
};

/// Wraps another backend and keeps every successful exchange.
class RecordingBackend final : public Backend {
public:
  explicit RecordingBackend(std::shared_ptr<Backend> inner) : inner_(std::move(inner)) {}
  Result<std::string> complete(const AgentPrompt &prompt, const std::vector<Message> &messages) override;
  std::string_view kind() const override { return inner_->kind(); }

  std::vector<Recording> recordings() const;
  Status save(const std::filesystem::path &path) const;

private:
  std::shared_ptr<Backend> inner_;
  mutable std::mutex mutex_;
  std::vector<Recording> recordings_;
};

/// Serves recorded outputs; unknown inputs are FixtureMissing.
class ReplayBackend final : public Backend {
public:
  explicit ReplayBackend(std::vector<Recording> recordings);
  static Result<std::shared_ptr<ReplayBackend>> load(const std::filesystem::path &path);
  Result<std::string> complete(const AgentPrompt &prompt, const std::vector<Message> &messages) override;
  std::string_view kind() const override { return "replay"; }

private:
  std::map<std::pair<std::string, std::string>, std::string> outputs_;
};

Result<std::shared_ptr<Backend>> make_backend(const BackendConfig &config, DebugSink sink = {});

} // namespace blockwright::llm
