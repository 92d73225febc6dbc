#include "blockwright/service/server.hpp"

#include <atomic>

#include <httplib.h>

#include "blockwright/grammar/parser.hpp"

namespace blockwright::service {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

int status_for(Errc code) {
  switch (code) {
  case Errc::SessionNotFound:
  case Errc::UnknownShape: return 404;
  case Errc::SessionBusy: return 409;
  case Errc::BadConfig:
  case Errc::InvalidArgument:
  case Errc::InvalidOverride:
  case Errc::UnknownLabel: return 400;
  case Errc::Io: return 500;
  default: return 422;
  }
}

void send_json(httplib::Response &res, const ordered_json &body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response &res, const Error &e) {
  send_json(res, {{"error", {{"code", errc_name(e.code)}, {"message", e.message}}}}, status_for(e.code));
}

Result<json> body_json(const httplib::Request &req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) return make_error(Errc::InvalidArgument, "request body must be a JSON object");
    return j;
  } catch (const json::exception &e) {
    return make_error(Errc::InvalidArgument, std::string("request body is not JSON: ") + e.what());
  }
}

Result<std::string> text_field(const json &body) {
  if (!body.contains("text") || !body["text"].is_string() || body["text"].get<std::string>().empty()) {
    return make_error(Errc::InvalidArgument, "\"text\" must be a nonempty string");
  }
  return body["text"].get<std::string>();
}

Result<ShapeApplication> application(const std::string &name, const json &body) {
  ShapeApplication app;
  app.name = name;
  try {
    if (!body.contains("x") || !body.contains("y")) return make_error(Errc::InvalidArgument, "x and y are required");
    app.x = body.at("x").get<int>();
    app.y = body.at("y").get<int>();
    if (body.contains("z") && !body["z"].is_null()) app.z = body["z"].get<int>();
    if (body.contains("color") && !body["color"].is_null()) {
      app.color = color_from_symbol(body["color"].get<std::string>());
      if (!app.color) return make_error(Errc::InvalidOverride, "unknown color " + body["color"].dump());
    }
    if (body.contains("part") && !body["part"].is_null()) {
      app.part = part_from_symbol(body["part"].get<std::string>());
      if (!app.part) return make_error(Errc::InvalidOverride, "unknown part " + body["part"].dump());
    }
    if (body.contains("scale") && !body["scale"].is_null()) {
      app.size = SizeOverride{body["scale"].get<int>(), std::nullopt};
    } else if (body.contains("size") && !body["size"].is_null()) {
      app.size = SizeOverride{std::nullopt, body["size"].get<std::array<int, 3>>()};
    }
  } catch (const json::exception &e) {
    return make_error(Errc::InvalidArgument, std::string("bad apply request: ") + e.what());
  }
  if (!in_bounds(app.x) || !in_bounds(app.y)) return make_error(Errc::InvalidArgument, "x and y must be in 1..16");
  return app;
}

std::string sse(const Event &e) {
  return "id: " + std::to_string(e.seq) + "\nevent: " + e.type + "\ndata: " + e.data.dump() + "\n\n";
}

} // namespace

struct HttpServer::Impl {
  SessionManager &manager;
  httplib::Server http;
  std::atomic<bool> stopping{false};

  explicit Impl(SessionManager &m) : manager(m) { routes(); }

  void turn(const httplib::Request &req, httplib::Response &res, bool answer) {
    auto body = body_json(req);
    if (!body) return send_error(res, body.error());
    auto text = text_field(body.value());
    if (!text) return send_error(res, text.error());
    const std::string id = req.matches[1];
    auto outcome = answer ? manager.post_answer(id, text.value()) : manager.post_instruction(id, text.value());
    if (!outcome) return send_error(res, outcome.error());
    send_json(res, {{"outcome", agent::outcome_to_json(outcome.value())}});
  }

  void routes() {
    http.Post("/sessions", [this](const httplib::Request &req, httplib::Response &res) {
      auto body = body_json(req);
      if (!body) return send_error(res, body.error());
      auto id = manager.create_session(body.value());
      if (!id) return send_error(res, id.error());
      send_json(res, {{"id", id.value()}, {"state", manager.get_state(id.value()).value()}}, 201);
    });
    http.Post(R"(/sessions/([^/]+)/instruction)",
              [this](const httplib::Request &req, httplib::Response &res) { turn(req, res, false); });
    http.Post(R"(/sessions/([^/]+)/answer)",
              [this](const httplib::Request &req, httplib::Response &res) { turn(req, res, true); });
    http.Post(R"(/sessions/([^/]+)/cancel)", [this](const httplib::Request &req, httplib::Response &res) {
      auto done = manager.cancel(req.matches[1]);
      if (!done) return send_error(res, done.error());
      send_json(res, {{"cancelled", true}});
    });
    http.Get(R"(/sessions/([^/]+)/state)", [this](const httplib::Request &req, httplib::Response &res) {
      auto state = manager.get_state(req.matches[1]);
      if (!state) return send_error(res, state.error());
      send_json(res, state.value());
    });
    http.Get(R"(/sessions/([^/]+)/events)", [this](const httplib::Request &req, httplib::Response &res) {
      const std::string id = req.matches[1];
      if (auto probe = manager.get_state(id); !probe) return send_error(res, probe.error());
      std::uint64_t after = 0;
      if (req.has_param("after")) after = std::stoull(req.get_param_value("after"));
      if (auto last = req.get_header_value("Last-Event-ID"); !last.empty()) after = std::stoull(last);
      const bool follow = req.get_param_value("follow") != "0";
      res.set_header("Cache-Control", "no-cache");
      res.set_chunked_content_provider(
          "text/event-stream", [this, id, after, follow](size_t, httplib::DataSink &sink) mutable {
            while (!stopping) {
              auto events = manager.events_since(id, after, std::chrono::milliseconds(follow ? 250 : 0));
              if (!events) break;
              for (const auto &e : events.value()) {
                const std::string chunk = sse(e);
                if (!sink.write(chunk.data(), chunk.size())) return false;
                after = e.seq;
              }
              if (!follow) break;
              if (events.value().empty() && !sink.is_writable()) return false;
            }
            sink.done();
            return true;
          });
    });
    http.Get("/shapes", [this](const httplib::Request &req, httplib::Response &res) {
      std::optional<std::string> id;
      if (req.has_param("session")) id = req.get_param_value("session");
      auto names = manager.shapes(id);
      if (!names) return send_error(res, names.error());
      send_json(res, {{"shapes", names.value()}});
    });
    http.Post(R"(/shapes/([^/]+)/apply)", [this](const httplib::Request &req, httplib::Response &res) {
      auto body = body_json(req);
      if (!body) return send_error(res, body.error());
      if (!body.value().contains("session") || !body.value()["session"].is_string()) {
        return send_error(res, make_error(Errc::InvalidArgument, "\"session\" is required"));
      }
      auto app = application(req.matches[1], body.value());
      if (!app) return send_error(res, app.error());
      const std::string id = body.value()["session"];
      auto outcome = manager.apply_shape(id, app.value());
      if (!outcome) return send_error(res, outcome.error());
      send_json(res, {{"outcome", agent::outcome_to_json(outcome.value())}, {"instruction", recall_sentence(app.value())}});
    });
    http.set_exception_handler([](const httplib::Request &, httplib::Response &res, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception &e) {
        what = e.what();
      } catch (...) {
      }
      send_json(res, {{"error", {{"code", "Internal"}, {"message", what}}}}, 500);
    });
  }
};

HttpServer::HttpServer(SessionManager &manager) : impl_(std::make_unique<Impl>(manager)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string &host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() { return impl_->http.listen_after_bind(); }

void HttpServer::stop() {
  impl_->stopping = true;
  impl_->http.stop();
}

bool HttpServer::running() const { return impl_->http.is_running(); }

} // namespace blockwright::service
