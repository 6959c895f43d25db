#include "oai/harvester.hpp"

#include <httplib.h>

#include <cctype>
#include <cmath>
#include <thread>

#include "common/error.hpp"
#include "common/text.hpp"

namespace archive_lens::oai {
namespace {

bool is_transient(const HttpResponse& r) {
  return r.status == 0 || r.status == 408 || r.status == 429 || (r.status >= 500 && r.status < 600);
}

}  // namespace

void HarvestConfig::validate() const {
  if (!text::starts_with(base_url, "http://") && !text::starts_with(base_url, "https://"))
    throw Error(ErrorCode::ConfigError, "base_url must be an absolute http(s) URL: '" + base_url + "'");
  if (base_url.find("://") + 3 >= base_url.size())
    throw Error(ErrorCode::ConfigError, "base_url has no host: '" + base_url + "'");
  if (metadata_prefix.empty()) throw Error(ErrorCode::ConfigError, "metadata_prefix must be non-empty");
  if (from && until && *from > *until) throw Error(ErrorCode::ConfigError, "from must not be after until");
  if (max_pages && *max_pages < 1) throw Error(ErrorCode::ConfigError, "max_pages must be positive");
  if (retry.max_attempts < 1) throw Error(ErrorCode::ConfigError, "retry.max_attempts must be >= 1");
  if (retry.backoff_initial.count() < 0) throw Error(ErrorCode::ConfigError, "retry.backoff_initial must be >= 0");
  if (!(retry.backoff_factor > 1.0)) throw Error(ErrorCode::ConfigError, "retry.backoff_factor must be > 1");
}

std::string url_encode(std::string_view s) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

std::string list_records_url(const HarvestConfig& config, const std::optional<std::string>& token) {
  std::string url = config.base_url;
  url += url.find('?') == std::string::npos ? '?' : '&';
  url += "verb=ListRecords";
  if (token) {
    url += "&resumptionToken=" + url_encode(*token);
    return url;
  }
  url += "&metadataPrefix=" + url_encode(config.metadata_prefix);
  if (config.set_filter) url += "&set=" + url_encode(*config.set_filter);
  if (config.from) url += "&from=" + url_encode(format_utc_timestamp(*config.from));
  if (config.until) url += "&until=" + url_encode(format_utc_timestamp(*config.until));
  return url;
}

HttpResponse http_get(const std::string& url, std::chrono::seconds timeout) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) return {0, {}, "not an absolute URL: " + url};
  auto path_start = url.find('/', scheme_end + 3);
  std::string origin = url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  if (!client.is_valid()) return {0, {}, "unsupported URL: " + url};
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_follow_location(true);
  auto res = client.Get(path);
  if (!res) return {0, {}, httplib::to_string(res.error())};
  return {res->status, res->body, {}};
}

HarvestSummary harvest(const HarvestConfig& config, const RecordSink& sink, const HttpGet& get,
                       const Sleeper& sleep) {
  config.validate();
  HttpGet fetch = get ? get : [](const std::string& url) { return http_get(url); };
  Sleeper pause = sleep ? sleep : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };

  HarvestSummary summary;
  std::optional<std::string> token;
  for (;;) {
    const std::string url = list_records_url(config, token);
    HttpResponse response;
    auto delay = config.retry.backoff_initial;
    for (int attempt = 1;; ++attempt) {
      response = fetch(url);
      if (response.status == 200) break;
      const std::string why =
          response.status == 0 ? response.error : "HTTP status " + std::to_string(response.status);
      if (!is_transient(response))
        throw Error(ErrorCode::TransportError, "ListRecords request failed: " + why);
      if (attempt >= config.retry.max_attempts)
        throw Error(ErrorCode::TransportError,
                    "ListRecords request failed after " + std::to_string(attempt) + " attempts: " + why);
      ++summary.retries;
      pause(delay);
      delay = std::chrono::milliseconds(
          static_cast<long long>(std::llround(static_cast<double>(delay.count()) * config.retry.backoff_factor)));
    }

    ListRecordsPage page;
    try {
      page = parse_list_records_page(response.body);
    } catch (const Error& e) {
      // An empty selection is a normal outcome, not a failure of the harvest.
      if (e.code() != ErrorCode::ProtocolError || e.detail() != "noRecordsMatch") throw;
    }
    ++summary.pages;
    for (auto& record : page.records) {
      ++summary.records;
      if (record.deleted) ++summary.deleted;
      summary.unknown_elements += static_cast<int>(record.unknown_element_count());
      sink(std::move(record));
    }
    token = page.resumption.token;
    if (!token) break;
    if (config.max_pages && summary.pages >= *config.max_pages) break;
  }
  return summary;
}

}  // namespace archive_lens::oai
