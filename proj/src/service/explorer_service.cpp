#include "service/explorer_service.hpp"

#include <algorithm>
#include <charconv>

#include <json.hpp>

#include "common/error.hpp"
#include "common/text.hpp"
#include "layout/serialize.hpp"
#include "layout/views.hpp"

namespace archive_lens::service {

using nlohmann::json;

namespace {

const std::set<std::string> kSearchFields = {"title", "creator", "subject"};

std::optional<std::string_view> param(const Params& params, std::string_view key) {
  auto it = params.find(key);
  if (it == params.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::optional<analytics::RollupMode> mode_param(const Params& params, analytics::RollupMode fallback) {
  auto v = param(params, "mode");
  if (!v || v->empty()) return fallback;
  return analytics::parse_rollup_mode(*v);
}

std::optional<std::size_t> positive_int(std::string_view text) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || v == 0) return std::nullopt;
  return v;
}

std::string cache_key(std::string_view path, const Params& params) {
  std::string key(path);
  for (const auto& [k, v] : params) key += "\x1f" + k + "=" + v;
  return key;
}

Response ok(std::string body) { return {200, "application/json; charset=utf-8", std::move(body)}; }

}  // namespace

Response api_error(int status, std::string_view code, std::string_view message) {
  return {status, "application/json; charset=utf-8",
          json{{"status", status}, {"code", code}, {"message", message}}.dump() + "\n"};
}

SearchResult search(const analytics::Snapshot& snapshot, std::string_view q, const std::set<std::string>& fields,
                    std::size_t limit) {
  SearchResult result;
  std::vector<std::string> tokens;
  for (auto t : text::split_whitespace(q)) tokens.push_back(text::to_lower_ascii(t));
  if (tokens.empty()) return result;
  std::vector<std::pair<std::size_t, const std::string*>> ranked;
  for (const auto& r : snapshot.records()) {
    std::vector<std::string> values;
    if (fields.count("title"))
      for (const auto& v : r.titles) values.push_back(text::to_lower_ascii(v));
    if (fields.count("creator"))
      for (const auto& v : r.creators) values.push_back(text::to_lower_ascii(v));
    if (fields.count("subject"))
      for (const auto& v : r.subjects) values.push_back(text::to_lower_ascii(v));
    std::size_t matches = 0;
    bool all = true;
    for (const auto& t : tokens) {
      std::size_t m = 0;
      for (const auto& v : values)
        if (v.find(t) != std::string::npos) ++m;
      if (m == 0) {
        all = false;
        break;
      }
      matches += m;
    }
    if (all) ranked.emplace_back(matches, &r.easy_id);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;
  });
  result.total = ranked.size();
  for (std::size_t i = 0; i < ranked.size() && i < limit; ++i) result.hits.push_back(*ranked[i].second);
  return result;
}

ExplorerService::ExplorerService(std::shared_ptr<const analytics::Snapshot> snapshot,
                                 std::set<std::string, std::less<>> embargo_ids, ServiceOptions options)
    : snapshot_(std::move(snapshot)), embargo_ids_(std::move(embargo_ids)), options_(options) {}

Response ExplorerService::handle(std::string_view path, const Params& params) const {
  try {
    return dispatch(path, params);
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::UnknownCategory: return api_error(400, "unknown_category", e.what());
      case ErrorCode::InvalidArgument: return api_error(400, "bad_argument", e.what());
      default: return api_error(500, error_code_name(e.code()), e.what());
    }
  } catch (const std::exception& e) {
    return api_error(500, "internal_error", e.what());
  }
}

Response ExplorerService::cached(const std::string& key, const std::function<std::string()>& compute) const {
  if (!options_.cache_layouts) return ok(compute());
  {
    std::lock_guard lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return ok(it->second);
  }
  std::string body = compute();
  std::lock_guard lock(cache_mutex_);
  return ok(cache_.emplace(key, std::move(body)).first->second);
}

Response ExplorerService::dispatch(std::string_view path, const Params& params) const {
  static const std::set<std::string_view> endpoints = {"/api/stats",   "/api/treemap",    "/api/circlepack",
                                                       "/api/tree",    "/api/search",     "/api/consistency",
                                                       "/api/depositors", "/api/histogram", "/api/rollups",
                                                       "/api/breakdown"};
  const bool dataset = text::starts_with(path, "/api/dataset/");
  if (!dataset && !endpoints.count(path)) return api_error(404, "unknown_endpoint", "no such endpoint: " + std::string(path));
  if (!snapshot_) return api_error(503, "snapshot_not_loaded", "no snapshot is loaded");
  const auto& snap = *snapshot_;

  if (dataset) {
    const std::string id(path.substr(std::string_view("/api/dataset/").size()));
    if (const auto* r = snap.find(id)) return ok(json::parse(catalogue::to_json_line(*r)).dump() + "\n");
    if (snap.find_quarantined(id)) return api_error(404, "quarantined", "dataset " + id + " is quarantined");
    return api_error(404, "unknown_dataset", "unknown dataset " + id);
  }
  if (path == "/api/stats") return ok(analytics::to_json(analytics::collection_stats(snap)));
  if (path == "/api/consistency") return ok(analytics::to_json(analytics::driver_consistency_check(snap, embargo_ids_)));
  if (path == "/api/histogram") return ok(analytics::histogram_json(analytics::multi_assignment_histogram(snap)));
  if (path == "/api/rollups") return ok(analytics::to_json(analytics::rollup_counts(snap)));
  if (path == "/api/breakdown") {
    auto exclude = param(params, "exclude");
    if (exclude && exclude->empty()) exclude.reset();
    return ok(analytics::to_json(analytics::access_breakdown_by_category(snap, exclude)));
  }
  if (path == "/api/depositors") {
    std::size_t limit = 0;
    if (auto l = param(params, "limit")) {
      auto v = positive_int(*l);
      if (!v) return api_error(400, "bad_limit", "limit must be a positive integer");
      limit = *v;
    }
    return ok(analytics::to_json(analytics::depositor_profiles(snap), limit));
  }
  if (path == "/api/search") {
    std::set<std::string> fields = kSearchFields;
    if (auto f = param(params, "fields"); f && !f->empty()) {
      fields.clear();
      for (auto name : text::split(*f, ',')) {
        std::string n(text::trim(name));
        if (!kSearchFields.count(n)) return api_error(400, "bad_field_name", "unknown search field '" + n + "'");
        fields.insert(n);
      }
    }
    std::size_t limit = options_.default_search_limit;
    if (auto l = param(params, "limit")) {
      auto v = positive_int(*l);
      if (!v || *v > options_.max_search_limit)
        return api_error(400, "bad_limit", "limit must be an integer in 1.." + std::to_string(options_.max_search_limit));
      limit = *v;
    }
    auto result = search(snap, param(params, "q").value_or(""), fields, limit);
    return ok(json{{"hits", result.hits}, {"total", result.total}}.dump() + "\n");
  }
  if (path == "/api/treemap") {
    layout::TreemapQuery query;
    query.viewport = options_.viewport;
    if (auto g = param(params, "group"); g && !g->empty()) {
      auto key = layout::parse_group_key(*g);
      if (!key) return api_error(400, "bad_group_key", "group must be category or depositor");
      query.group = *key;
    }
    auto mode = mode_param(params, analytics::RollupMode::Assignment);
    if (!mode) return api_error(400, "bad_mode", "mode must be assignment or unique");
    query.mode = *mode;
    if (auto e = param(params, "exclude"); e && !e->empty()) {
      if (!snap.tree().contains(*e)) return api_error(400, "unknown_category", "unknown category " + std::string(*e));
      query.exclude = std::string(*e);
    }
    if (auto l = param(params, "level"); l && !l->empty()) {
      auto v = positive_int(*l);
      if (!v || *v > catalogue::kMaxTreeDepth) return api_error(400, "bad_level", "level must be 1, 2 or 3");
      query.level = static_cast<int>(*v);
    }
    return cached(cache_key(path, params), [&] { return layout::to_json(layout::snapshot_treemap(snap, query)); });
  }
  auto mode = mode_param(params, analytics::RollupMode::Unique);
  if (!mode) return api_error(400, "bad_mode", "mode must be assignment or unique");
  if (path == "/api/circlepack") {
    return cached(cache_key(path, params), [&] {
      bool any = false;
      const auto rollups = analytics::rollup_counts(snap);
      for (const auto& [code, e] : rollups.entries()) any = any || e.size(*mode) > 0;
      if (!any) return layout::to_json(layout::CirclePackLayout{});
      return layout::to_json(layout::circle_pack(snap.tree(), rollups, *mode));
    });
  }
  layout::TreeLayoutOptions options;
  options.mode = *mode;
  return cached(cache_key(path, params), [&] { return layout::to_json(layout::snapshot_tree(snap, options)); });
}

}  // namespace archive_lens::service
