#pragma once

#include <memory>
#include <optional>
#include <string>

#include "service/explorer_service.hpp"

namespace archive_lens::service {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::optional<std::string> static_dir;
  bool cors = false;  // adds Access-Control-Allow-Origin: *
};

class HttpServer {
 public:
  HttpServer(std::shared_ptr<const ExplorerService> service, ServerOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Returns the bound port. Throws Error(IoError) when the address is taken
  /// or the static directory does not exist.
  int bind();
  /// Blocks until stop(). bind() first.
  void run();
  /// Blocks until run() is accepting connections.
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace archive_lens::service
