#pragma once

// JSON-over-HTTP service holding named theory sessions.
//
//   POST /api/theory                       DSL text (or {"source": ...}) -> 201 {id}
//   GET  /api/theory/{id}                  source, version
//   GET  /api/theory/{id}/arguments
//   GET  /api/theory/{id}/extensions?semantics=grounded|complete|preferred|stable
//   POST /api/theory/{id}/explain          {target, profile, weights, format, semantics}
//   POST /api/theory/{id}/challenge        {rule | scheme+bindings, cq, confidence}
//   POST /api/theory/{id}/whatif           {disable_premises, preferences{add,remove}, commit, target}
//   GET  /api/schemes
//
// Errors are {code, message}: 400 malformed, 404 unknown session or target,
// 413 body over the size cap, 422 INSUFFICIENT or a size limit.

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>

namespace phax::service {

struct Config {
  std::string host = "127.0.0.1";
  int port = 8080;                  // 0 picks a free port
  std::string state_dir;            // empty: no snapshots
  std::size_t max_body = 1 << 20;  // bytes
};

// PHAX_PORT when set and valid, else 8080.
int default_port();

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

class Service {
 public:
  explicit Service(Config config = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Transport-free entry point used by the HTTP layer and by tests.
  Response handle(std::string_view method, std::string_view path,
                  const std::map<std::string, std::string>& query, std::string_view body,
                  std::string_view content_type = {});

  // Binds the listening socket and returns the bound port. Throws Error(Io) on failure.
  int bind();
  // Serves until stop(); bind() must have succeeded.
  void listen();
  void stop();

  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace phax::service
