#include "service/http_server.hpp"

#include <httplib.h>

#include "common/error.hpp"

namespace archive_lens::service {

struct HttpServer::Impl {
  std::shared_ptr<const ExplorerService> service;
  ServerOptions options;
  httplib::Server server;
  bool bound = false;
};

HttpServer::HttpServer(std::shared_ptr<const ExplorerService> service, ServerOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  impl_->options = std::move(options);
  auto* impl = impl_.get();
  // SO_REUSEADDR only: httplib's default SO_REUSEPORT would let a second
  // server share a busy port silently.
  impl->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  impl->server.Get(R"(/api/.*)", [impl](const httplib::Request& req, httplib::Response& res) {
    Params params;
    for (const auto& [k, v] : req.params) params.emplace(k, v);  // first value wins
    Response r = impl->service->handle(req.path, params);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  });
  if (impl->options.cors) {
    impl->server.set_post_routing_handler([](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
    });
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& o = impl_->options;
  if (o.static_dir && !impl_->server.set_mount_point("/", *o.static_dir))
    throw Error(ErrorCode::IoError, "static directory not found: " + *o.static_dir);
  int port = o.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(o.host);
  } else if (!impl_->server.bind_to_port(o.host, port)) {
    port = -1;
  }
  if (port < 0) throw Error(ErrorCode::IoError, "cannot bind " + o.host + ":" + std::to_string(o.port));
  impl_->bound = true;
  return port;
}

void HttpServer::run() {
  if (!impl_->bound) throw Error(ErrorCode::InvalidArgument, "run() before bind()");
  impl_->server.listen_after_bind();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace archive_lens::service
