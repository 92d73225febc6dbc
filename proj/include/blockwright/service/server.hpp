#pragma once

#include <memory>
#include <string>

#include "blockwright/service/session.hpp"

namespace blockwright::service {

/// HTTP/JSON front end.
///
///   POST /sessions                      {"backend":{..}?,"shape_library":..?} -> {"id","state"}
///   POST /sessions/{id}/instruction     {"text"} -> {"outcome"}
///   POST /sessions/{id}/answer          {"text"} -> {"outcome"}
///   POST /sessions/{id}/cancel          -> {"cancelled":true}
///   GET  /sessions/{id}/state           -> state object
///   GET  /sessions/{id}/events?after=N&follow=0|1   text/event-stream
///   GET  /shapes?session=ID             -> {"shapes":[..]}
///   POST /shapes/{name}/apply           {"session","x","y","z"?,"color"?,"part"?,"scale"?|"size"?}
///
/// Errors come back as {"error":{"code","message"}} with 404 for unknown
/// sessions, 409 for busy ones and 400 for bad input.
class HttpServer {
public:
  explicit HttpServer(SessionManager &manager);
  ~HttpServer();
  HttpServer(const HttpServer &) = delete;
  HttpServer &operator=(const HttpServer &) = delete;

  /// Binds to the port, or any free port when port is 0. Returns the port or -1.
  int bind(const std::string &host, int port);
  /// Serves until stop(). Call after bind.
  bool run();
  void stop();
  bool running() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace blockwright::service
