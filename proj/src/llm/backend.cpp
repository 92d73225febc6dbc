#include "blockwright/llm/backend.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <thread>
#include <tuple>

#include <httplib.h>

#include "blockwright/grammar/generator.hpp"
#include "blockwright/grammar/lexicon.hpp"
#include "blockwright/grammar/parser.hpp"

namespace blockwright::llm {

namespace {

struct Endpoint {
  std::string base; // scheme://host[:port]
  std::string path;
};

Result<Endpoint> split_endpoint(const std::string &url) {
  static const std::regex pattern(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, pattern)) {
    return make_error(Errc::BadConfig, "endpoint '" + url + "' is not an http(s) URL");
  }
  return Endpoint{m[1].str(), m[2].matched ? m[2].str() : "/v1/chat/completions"};
}

std::string last_content(const std::vector<Message> &messages) {
  return messages.empty() ? std::string() : messages.back().content;
}

std::string structure_name(const ParsedItem &item) {
  if (const auto *spec = std::get_if<PartialPlacementSpec>(&item)) {
    return spec->kind ? std::string(display_name(*spec->kind)) : "part";
  }
  const auto &cmd = std::get<MemoryCommand>(item);
  if (const auto *n = std::get_if<NameCommand>(&cmd)) return n->name;
  return std::get<RecallCommand>(cmd).name;
}

std::string cot_answer(const std::string &instruction) {
  auto parsed = grammar::parse_instruction(instruction);
  if (!parsed) return "Could you rephrase that instruction?";
  std::string out;
  for (const auto &item : parsed.value()) {
    const auto *spec = std::get_if<PartialPlacementSpec>(&item);
    if (spec == nullptr) return "I can only place individual parts. Which parts should I place?";
    int x = 0, y = 0;
    if (spec->relative) {
      std::tie(x, y) = grammar::resolve_relative(*spec->relative);
    } else if (spec->x && spec->y) {
      x = *spec->x;
      y = *spec->y;
    }
    if (!spec->kind) return "Which part should I place?";
    if (!spec->color) return "What color should the " + std::string(display_name(*spec->kind)) + " be?";
    if (x == 0) return "Where should I place the " + std::string(display_name(*spec->kind)) + "?";
    out += "place(" + std::string(display_name(*spec->kind)) + ", " + std::string(to_symbol(*spec->color)) +
           ", " + std::to_string(y) + ", " + std::to_string(x) + ", " + std::to_string(spec->z.value_or(1)) +
           ")\n";
  }
  return out;
}

std::string redact(std::string text, const std::string &secret) {
  if (secret.empty()) return text;
  for (auto pos = text.find(secret); pos != std::string::npos; pos = text.find(secret, pos)) {
    text.replace(pos, secret.size(), "***");
  }
  return text;
}

} // namespace

std::string_view kind_name(BackendConfig::Kind kind) {
  switch (kind) {
  case BackendConfig::Kind::Deterministic: return "deterministic";
  case BackendConfig::Kind::Remote: return "remote";
  case BackendConfig::Kind::Replay: return "replay";
  }
  return "deterministic";
}

Status BackendConfig::validate() const {
  if (!(timeout_seconds > 0)) return make_error(Errc::BadConfig, "timeout_seconds must be positive");
  if (max_retries < 0 || max_retries > 5) return make_error(Errc::BadConfig, "max_retries must be in 0..5");
  if (kind == Kind::Remote) {
    if (auto e = split_endpoint(endpoint); !e) return e.error();
    if (model.empty()) return make_error(Errc::BadConfig, "remote backend needs a model name");
  }
  if (kind == Kind::Replay && replay_path.empty()) {
    return make_error(Errc::BadConfig, "replay backend needs replay_path");
  }
  return {};
}

Result<BackendConfig> BackendConfig::from_json(const nlohmann::json &j) {
  BackendConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) return make_error(Errc::BadConfig, "backend section must be an object");
  try {
    const std::string kind = j.value("kind", "deterministic");
    if (kind == "deterministic") c.kind = Kind::Deterministic;
    else if (kind == "remote") c.kind = Kind::Remote;
    else if (kind == "replay") c.kind = Kind::Replay;
    else return make_error(Errc::BadConfig, "unknown backend kind '" + kind + "'");
    c.endpoint = j.value("endpoint", c.endpoint);
    c.model = j.value("model", c.model);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.temperature = j.value("temperature", c.temperature);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.replay_path = j.value("replay_path", c.replay_path);
  } catch (const nlohmann::json::exception &e) {
    return make_error(Errc::BadConfig, std::string("backend section: ") + e.what());
  }
  c.apply_environment();
  if (auto ok = c.validate(); !ok) return ok.error();
  return c;
}

nlohmann::ordered_json BackendConfig::to_json() const {
  return {{"kind", std::string(kind_name(kind))}, {"endpoint", endpoint},     {"model", model},
          {"timeout_seconds", timeout_seconds},   {"max_retries", max_retries}, {"temperature", temperature},
          {"api_key_env", api_key_env},           {"replay_path", replay_path}};
}

void BackendConfig::apply_environment() {
  if (const char *e = std::getenv("BLOCKWRIGHT_ENDPOINT"); e != nullptr && *e != '\0') endpoint = e;
  if (const char *m = std::getenv("BLOCKWRIGHT_MODEL"); m != nullptr && *m != '\0') model = m;
}

Result<std::string> DeterministicBackend::complete(const AgentPrompt &prompt,
                                                   const std::vector<Message> &messages) {
  const std::string input = last_content(messages);
  switch (prompt.role) {
  case Role::Parser: {
    nlohmann::ordered_json structures = nlohmann::ordered_json::array();
    if (auto parsed = grammar::parse_instruction(input)) {
      for (const auto &item : parsed.value()) {
        structures.push_back({{"plan", grammar::render(item)}, {"name", structure_name(item)}});
      }
    }
    return nlohmann::ordered_json{{"structures", structures}}.dump();
  }
  case Role::Locator:
    return nlohmann::ordered_json{{"instruction", input}}.dump();
  case Role::Cot:
    return cot_answer(input);
  case Role::Abstractor:
    return make_error(Errc::Unsupported, "the deterministic backend does not write code");
  }
  return make_error(Errc::Unsupported, "unknown role");
}

RemoteBackend::RemoteBackend(BackendConfig config, DebugSink sink)
    : config_(std::move(config)), sink_(std::move(sink)) {
  if (const char *key = std::getenv(config_.api_key_env.c_str()); key != nullptr) api_key_ = key;
}

Result<std::string> RemoteBackend::complete(const AgentPrompt &prompt, const std::vector<Message> &messages) {
  nlohmann::ordered_json msgs = nlohmann::ordered_json::array();
  msgs.push_back({{"role", "system"}, {"content", prompt.system}});
  for (const auto &m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  const std::string body =
      nlohmann::ordered_json{{"model", config_.model}, {"messages", msgs}, {"temperature", config_.temperature}}
          .dump();

  Error last = make_error(Errc::TransportError, "no attempt made");
  for (int attempt_no = 0; attempt_no <= config_.max_retries; ++attempt_no) {
    if (attempt_no > 0) std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt_no));
    auto r = attempt(body);
    if (r) return r;
    last = r.error();
    const bool transient = last.code == Errc::TransportError || last.code == Errc::Timeout ||
                           (last.code == Errc::ProviderError && (last.detail == 429 || last.detail >= 500));
    if (!transient) break;
  }
  return last;
}

Result<std::string> RemoteBackend::attempt(const std::string &body) {
  auto endpoint = split_endpoint(config_.endpoint);
  if (!endpoint) return endpoint.error();
  httplib::Client client(endpoint.value().base);
  const auto secs = static_cast<time_t>(config_.timeout_seconds);
  const auto usecs = static_cast<time_t>((config_.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  if (sink_) {
    sink_({{"event", "request"},
           {"url", config_.endpoint},
           {"authorization", api_key_.empty() ? "none" : "Bearer ***"},
           {"body", redact(body, api_key_)}});
  }
  const auto started = std::chrono::steady_clock::now();
  auto res = client.Post(endpoint.value().path, headers, body, "application/json");
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (!res) {
    const auto err = res.error();
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           ((err == httplib::Error::Read || err == httplib::Error::Write) &&
                            elapsed >= config_.timeout_seconds * 0.9);
    if (sink_) sink_({{"event", "error"}, {"error", httplib::to_string(err)}});
    if (timed_out) {
      return make_error(Errc::Timeout, "no response from " + config_.endpoint + " within " +
                                           std::to_string(config_.timeout_seconds) + " s");
    }
    return make_error(Errc::TransportError, config_.endpoint + ": " + httplib::to_string(err));
  }
  if (sink_) {
    sink_({{"event", "response"}, {"status", res->status}, {"body", redact(res->body, api_key_)}});
  }
  if (res->status < 200 || res->status >= 300) {
    return make_error(Errc::ProviderError, "provider answered HTTP " + std::to_string(res->status), res->status);
  }
  auto j = nlohmann::json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("choices") || !j.at("choices").is_array() ||
      j.at("choices").empty()) {
    return make_error(Errc::ProviderError, "provider response has no choices", res->status);
  }
  const auto &choice = j.at("choices").at(0);
  if (!choice.is_object() || !choice.contains("message") || !choice.at("message").is_object() ||
      !choice.at("message").contains("content") || !choice.at("message").at("content").is_string()) {
    return make_error(Errc::ProviderError, "provider response has no message content", res->status);
  }
  return choice.at("message").at("content").get<std::string>();
}

Result<std::string> RecordingBackend::complete(const AgentPrompt &prompt, const std::vector<Message> &messages) {
  auto out = inner_->complete(prompt, messages);
  if (out) {
    std::lock_guard lock(mutex_);
    recordings_.push_back({std::string(role_name(prompt.role)), last_content(messages), out.value()});
  }
  return out;
}

std::vector<Recording> RecordingBackend::recordings() const {
  std::lock_guard lock(mutex_);
  return recordings_;
}

Status RecordingBackend::save(const std::filesystem::path &path) const {
  std::ofstream out(path);
  if (!out) return make_error(Errc::Io, "cannot write " + path.string());
  for (const auto &r : recordings()) {
    out << nlohmann::ordered_json{{"role", r.role}, {"input", r.input}, {"output", r.output}}.dump() << '\n';
  }
  return {};
}

ReplayBackend::ReplayBackend(std::vector<Recording> recordings) {
  for (auto &r : recordings) outputs_[{r.role, r.input}] = std::move(r.output);
}

Result<std::shared_ptr<ReplayBackend>> ReplayBackend::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) return make_error(Errc::FixtureMissing, "no recordings at " + path.string());
  std::vector<Recording> recs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      return make_error(Errc::CorruptLog, path.string() + ": bad recording", line_no);
    }
    recs.push_back({j.value("role", ""), j.value("input", ""), j.value("output", "")});
  }
  return std::make_shared<ReplayBackend>(std::move(recs));
}

Result<std::string> ReplayBackend::complete(const AgentPrompt &prompt, const std::vector<Message> &messages) {
  auto it = outputs_.find({std::string(role_name(prompt.role)), last_content(messages)});
  if (it == outputs_.end()) {
    return make_error(Errc::FixtureMissing, "no recorded output for \"" + last_content(messages) + "\"");
  }
  return it->second;
}

Result<std::shared_ptr<Backend>> make_backend(const BackendConfig &config, DebugSink sink) {
  if (auto ok = config.validate(); !ok) return ok.error();
  switch (config.kind) {
  case BackendConfig::Kind::Deterministic:
    return std::shared_ptr<Backend>(std::make_shared<DeterministicBackend>());
  case BackendConfig::Kind::Remote:
    return std::shared_ptr<Backend>(std::make_shared<RemoteBackend>(config, std::move(sink)));
  case BackendConfig::Kind::Replay: {
    auto replay = ReplayBackend::load(config.replay_path);
    if (!replay) return replay.error();
    return std::shared_ptr<Backend>(replay.value());
  }
  }
  return make_error(Errc::BadConfig, "unknown backend kind");
}

} // namespace blockwright::llm
