#include "oai/mock_endpoint.hpp"

#include <httplib.h>

#include <mutex>
#include <thread>

#include "common/error.hpp"

namespace archive_lens::oai {
namespace {

constexpr const char* kEnvelopeOpen =
    "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    "<OAI-PMH xmlns=\"http://www.openarchives.org/OAI/2.0/\">\n"
    "<responseDate>2012-01-20T12:00:00Z</responseDate>\n"
    "<request verb=\"ListRecords\">mock</request>\n";

}  // namespace

std::string render_list_records_response(const std::vector<RawRecord>& records,
                                         const std::optional<std::string>& token,
                                         long long complete_list_size, long long cursor) {
  std::string out = kEnvelopeOpen;
  out += "<ListRecords>\n";
  for (const auto& r : records) out += render_record_xml(r);
  if (token) {
    out += "<resumptionToken completeListSize=\"" + std::to_string(complete_list_size) + "\" cursor=\"" +
           std::to_string(cursor) + "\">" + xml_escape(*token) + "</resumptionToken>\n";
  } else if (cursor > 0) {
    out += "<resumptionToken completeListSize=\"" + std::to_string(complete_list_size) + "\" cursor=\"" +
           std::to_string(cursor) + "\"/>\n";
  }
  out += "</ListRecords>\n</OAI-PMH>\n";
  return out;
}

std::string render_oai_error(const std::string& code, const std::string& message) {
  return std::string(kEnvelopeOpen) + "<error code=\"" + xml_escape(code) + "\">" + xml_escape(message) +
         "</error>\n</OAI-PMH>\n";
}

struct MockOaiEndpoint::Impl {
  std::vector<std::vector<RawRecord>> pages;
  MockEndpointOptions options;
  httplib::Server server;
  std::thread thread;
  int port = 0;
  mutable std::mutex mutex;
  std::vector<std::string> log;
  int failures = 0;

  std::string page_response(const httplib::Request& req) {
    if (!req.has_param("verb") || req.get_param_value("verb") != "ListRecords")
      return render_oai_error("badVerb", "only ListRecords is supported");
    long long total = 0;
    for (const auto& p : pages) total += static_cast<long long>(p.size());

    std::size_t index = 0;
    if (req.has_param("resumptionToken")) {
      if (req.params.size() != 2)
        return render_oai_error("badArgument", "resumptionToken is an exclusive argument");
      const std::string token = req.get_param_value("resumptionToken");
      bool found = false;
      for (std::size_t k = 1; k < pages.size(); ++k) {
        if (token == options.token_prefix + std::to_string(k)) {
          index = k;
          found = true;
        }
      }
      if (!found) return render_oai_error("badResumptionToken", "unknown token " + token);
    } else if (!req.has_param("metadataPrefix")) {
      return render_oai_error("badArgument", "metadataPrefix is required");
    }

    if (pages.empty()) return render_list_records_response({}, std::nullopt, 0, 0);
    long long cursor = 0;
    for (std::size_t k = 0; k < index; ++k) cursor += static_cast<long long>(pages[k].size());
    std::optional<std::string> next;
    if (index + 1 < pages.size()) next = options.token_prefix + std::to_string(index + 1);
    return render_list_records_response(pages[index], next, total, cursor);
  }
};

MockOaiEndpoint::MockOaiEndpoint(std::vector<std::vector<RawRecord>> pages, MockEndpointOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->pages = std::move(pages);
  impl_->options = std::move(options);
}

MockOaiEndpoint::~MockOaiEndpoint() { stop(); }

int MockOaiEndpoint::start(const std::string& host, int port) {
  Impl& s = *impl_;
  s.server.Get("/oai", [&s](const httplib::Request& req, httplib::Response& res) {
    int request_index = 0;
    {
      std::lock_guard lock(s.mutex);
      auto q = req.target.find('?');
      s.log.push_back(q == std::string::npos ? std::string() : req.target.substr(q + 1));
      request_index = static_cast<int>(s.log.size()) - 1;
      if (s.options.fail_requests.count(request_index)) {
        ++s.failures;
        res.status = s.options.fail_status;
        res.set_content("injected failure", "text/plain");
        return;
      }
    }
    res.set_content(s.page_response(req), "text/xml; charset=utf-8");
  });
  s.port = port == 0 ? s.server.bind_to_any_port(host) : (s.server.bind_to_port(host, port) ? port : -1);
  if (s.port <= 0) throw Error(ErrorCode::IoError, "mock endpoint cannot bind " + host);
  s.thread = std::thread([&s] { s.server.listen_after_bind(); });
  s.server.wait_until_ready();
  return s.port;
}

void MockOaiEndpoint::stop() {
  if (!impl_) return;
  if (impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

std::string MockOaiEndpoint::base_url() const { return "http://127.0.0.1:" + std::to_string(impl_->port) + "/oai"; }

std::vector<std::string> MockOaiEndpoint::request_log() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->log;
}

int MockOaiEndpoint::failures_served() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->failures;
}

}  // namespace archive_lens::oai
