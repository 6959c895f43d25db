#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

#include "analytics/analytics.hpp"
#include "layout/geometry.hpp"

namespace archive_lens::service {

using Params = std::map<std::string, std::string, std::less<>>;

struct Response {
  int status = 200;
  std::string content_type = "application/json; charset=utf-8";
  std::string body;
};

struct ServiceOptions {
  layout::Rect viewport{0, 0, 1000, 600};
  bool cache_layouts = true;
  std::size_t default_search_limit = 200;
  std::size_t max_search_limit = 10000;
};

/// Answers /api/* requests from one immutable snapshot. handle() is a pure
/// function of (snapshot, path, params) and safe to call concurrently.
class ExplorerService {
 public:
  explicit ExplorerService(std::shared_ptr<const analytics::Snapshot> snapshot,
                           std::set<std::string, std::less<>> embargo_ids = {}, ServiceOptions options = {});

  Response handle(std::string_view path, const Params& params) const;
  bool loaded() const { return snapshot_ != nullptr; }

 private:
  Response dispatch(std::string_view path, const Params& params) const;
  Response cached(const std::string& key, const std::function<std::string()>& compute) const;

  std::shared_ptr<const analytics::Snapshot> snapshot_;
  std::set<std::string, std::less<>> embargo_ids_;
  ServiceOptions options_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<std::string, std::string> cache_;
};

/// {"status":..,"code":..,"message":..}
Response api_error(int status, std::string_view code, std::string_view message);

/// Hits ordered by number of matching (token, value) pairs descending, then
/// easy_id. Every token must match some selected field (case-insensitive
/// substring).
struct SearchResult {
  std::vector<std::string> hits;
  std::size_t total = 0;
};
SearchResult search(const analytics::Snapshot& snapshot, std::string_view q, const std::set<std::string>& fields,
                    std::size_t limit);

}  // namespace archive_lens::service
