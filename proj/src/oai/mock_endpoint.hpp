#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oai/raw_record.hpp"

namespace archive_lens::oai {

struct MockEndpointOptions {
  /// Zero-based request indices answered with `fail_status` instead of a page.
  std::set<int> fail_requests;
  int fail_status = 503;
  std::string token_prefix = "t";
};

/// A small OAI-PMH ListRecords server over fixed pages, for tests and demos.
/// Page k (k >= 1) is reachable only through token "<prefix>k"; requests that
/// mix a token with other arguments get a badArgument error, as a strict
/// repository would answer.
class MockOaiEndpoint {
 public:
  explicit MockOaiEndpoint(std::vector<std::vector<RawRecord>> pages, MockEndpointOptions options = {});
  ~MockOaiEndpoint();
  MockOaiEndpoint(const MockOaiEndpoint&) = delete;
  MockOaiEndpoint& operator=(const MockOaiEndpoint&) = delete;

  /// Binds (port 0 = any free port), starts serving on a background thread and
  /// returns the bound port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();

  std::string base_url() const;
  /// Raw query strings of every request received, failures included.
  std::vector<std::string> request_log() const;
  int failures_served() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string render_list_records_response(const std::vector<RawRecord>& records,
                                         const std::optional<std::string>& token,
                                         long long complete_list_size, long long cursor);
std::string render_oai_error(const std::string& code, const std::string& message);

}  // namespace archive_lens::oai
