#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>

#include "common/timestamp.hpp"
#include "oai/list_records_parser.hpp"
#include "oai/raw_record.hpp"

namespace archive_lens::oai {

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds backoff_initial{1000};
  double backoff_factor = 2.0;
};

struct HarvestConfig {
  std::string base_url;
  std::string metadata_prefix = "oai_dc";
  std::optional<std::string> set_filter;
  std::optional<Timestamp> from;
  std::optional<Timestamp> until;
  std::optional<int> max_pages;
  RetryPolicy retry;

  /// Throws Error(ConfigError) naming the first violated constraint.
  void validate() const;
};

struct HarvestSummary {
  int pages = 0;
  int records = 0;
  int deleted = 0;
  int retries = 0;
  int unknown_elements = 0;
};

/// status == 0 means the request never produced an HTTP response; `error`
/// then describes the transport failure.
struct HttpResponse {
  int status = 0;
  std::string body;
  std::string error;
};

using HttpGet = std::function<HttpResponse(const std::string& url)>;
using Sleeper = std::function<void(std::chrono::milliseconds)>;
using RecordSink = std::function<void(RawRecord&&)>;

/// Plain HTTP GET over cpp-httplib with the given connect/read timeout.
HttpResponse http_get(const std::string& url, std::chrono::seconds timeout = std::chrono::seconds(30));

/// Request URL for one ListRecords call. With a token only the verb and the
/// token are sent, as the protocol requires.
std::string list_records_url(const HarvestConfig& config, const std::optional<std::string>& token);

std::string url_encode(std::string_view s);

/// Walks a ListRecords sequence strictly in order, delivering every record
/// (deleted ones included) to `sink` exactly once. Transient failures
/// (connection errors, 408/429/5xx) are retried with exponential backoff.
HarvestSummary harvest(const HarvestConfig& config, const RecordSink& sink, const HttpGet& get = {},
                       const Sleeper& sleep = {});

}  // namespace archive_lens::oai
