#include "archive_lens/archive_lens.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "analytics/analytics.hpp"
#include "catalogue/corpus_generator.hpp"
#include "catalogue/snapshot.hpp"
#include "common/error.hpp"
#include "common/text.hpp"
#include "common/timestamp.hpp"
#include "layout/serialize.hpp"
#include "layout/views.hpp"
#include "oai/dump.hpp"
#include "oai/harvester.hpp"
#include "service/explorer_service.hpp"
#include "service/http_server.hpp"

namespace al = archive_lens;

struct al_snapshot {
  std::shared_ptr<const al::catalogue::Snapshot> snapshot;
};

struct al_service {
  std::shared_ptr<const al::service::ExplorerService> service;
};

struct al_server {
  al::service::HttpServer server;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_error_code;

al_status fail(al_status status, std::string code, std::string message) {
  last_error = std::move(message);
  last_error_code = std::move(code);
  return status;
}

template <class F>
al_status guarded(F&& f) {
  try {
    last_error.clear();
    last_error_code.clear();
    return f();
  } catch (const al::Error& e) {
    std::string msg = e.what();
    if (!e.detail().empty() && msg.find(e.detail()) == std::string::npos) msg += " (" + e.detail() + ")";
    return fail(static_cast<al_status>(static_cast<int>(e.code()) + 1), std::string(al::error_code_name(e.code())),
                msg);
  } catch (const std::bad_alloc&) {
    return fail(AL_ERR_INTERNAL, "OutOfMemory", "out of memory");
  } catch (const std::exception& e) {
    return fail(AL_ERR_INTERNAL, "Internal", e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void set_out(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

al_status require(const void* p, const char* what) {
  if (p) return AL_OK;
  return fail(AL_ERR_INVALID_ARGUMENT, "InvalidArgument", std::string(what) + " must not be NULL");
}

std::optional<al::Timestamp> timestamp_arg(const char* text, const char* what) {
  if (!text || !*text) return std::nullopt;
  auto t = al::parse_utc_timestamp(text);
  if (!t) throw al::Error(al::ErrorCode::ConfigError, std::string(what) + " is not a UTC date or timestamp: " + text);
  return t;
}

al::analytics::RollupMode mode_arg(const char* mode, al::analytics::RollupMode fallback) {
  if (!mode || !*mode) return fallback;
  auto m = al::analytics::parse_rollup_mode(mode);
  if (!m) throw al::Error(al::ErrorCode::InvalidArgument, std::string("mode must be assignment or unique, got ") + mode);
  return *m;
}

std::set<std::string, std::less<>> embargo_arg(const char* path) {
  if (!path || !*path) return {};
  return al::analytics::parse_id_list(al::text::read_file(path));
}

}  // namespace

extern "C" {

AL_API const char* al_version(void) { return "0.1.0"; }
AL_API const char* al_last_error(void) { return last_error.c_str(); }
AL_API const char* al_last_error_code(void) { return last_error_code.c_str(); }
AL_API void al_free_string(char* s) { std::free(s); }

AL_API const char* al_status_name(al_status status) {
  switch (status) {
    case AL_OK: return "Ok";
    case AL_ERR_INTERNAL: return "Internal";
    default: break;
  }
  const int i = static_cast<int>(status) - 1;
  if (i >= 0 && i <= static_cast<int>(al::ErrorCode::EmptyTree))
    return al::error_code_name(static_cast<al::ErrorCode>(i)).data();
  return "Unknown";
}

AL_API void al_harvest_options_init(al_harvest_options* o) {
  if (!o) return;
  const al::oai::RetryPolicy retry;
  *o = al_harvest_options{nullptr, nullptr, nullptr, nullptr, nullptr, 0, retry.max_attempts,
                          static_cast<int>(retry.backoff_initial.count()), retry.backoff_factor};
}

AL_API al_status al_harvest_to_file(const al_harvest_options* o, const char* out_path, char** summary_json) {
  return guarded([&] {
    if (auto s = require(o, "options"); s != AL_OK) return s;
    if (auto s = require(out_path, "out_path"); s != AL_OK) return s;
    al::oai::HarvestConfig config;
    config.base_url = o->base_url ? o->base_url : "";
    if (o->metadata_prefix && *o->metadata_prefix) config.metadata_prefix = o->metadata_prefix;
    if (o->set_filter && *o->set_filter) config.set_filter = o->set_filter;
    config.from = timestamp_arg(o->from, "from");
    config.until = timestamp_arg(o->until, "until");
    if (o->max_pages > 0) config.max_pages = o->max_pages;
    config.retry.max_attempts = o->max_attempts;
    config.retry.backoff_initial = std::chrono::milliseconds(o->backoff_initial_ms);
    config.retry.backoff_factor = o->backoff_factor;
    config.validate();

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw al::Error(al::ErrorCode::IoError, std::string("cannot write ") + out_path);
    auto summary = al::oai::harvest(config, [&](al::oai::RawRecord&& r) { out << al::oai::to_export_line(r) << '\n'; });
    out.close();
    if (!out) throw al::Error(al::ErrorCode::IoError, std::string("write failed: ") + out_path);
    set_out(summary_json, nlohmann::json{{"pages", summary.pages},
                                         {"records", summary.records},
                                         {"deleted", summary.deleted},
                                         {"retries", summary.retries},
                                         {"unknownElements", summary.unknown_elements}}
                                  .dump() +
                              "\n");
    return AL_OK;
  });
}

AL_API al_status al_build_snapshot(const char* raw_path, const char* tree_path, const char* rights_config_path,
                                   const char* source, const char* taken_at, const char* out_dir,
                                   char** summary_json) {
  return guarded([&] {
    for (auto [p, n] : {std::pair{raw_path, "raw_path"}, {tree_path, "tree_path"}, {out_dir, "out_dir"}})
      if (auto s = require(p, n); s != AL_OK) return s;
    al::catalogue::NormalizeOptions options;
    if (rights_config_path && *rights_config_path) options.rights = al::catalogue::RightsMap::load(rights_config_path);
    al::catalogue::Provenance provenance;
    if (source && *source) {
      const std::string_view s(source);
      if (s == "harvest") provenance.source = al::catalogue::SnapshotSource::Harvest;
      else if (s == "dump") provenance.source = al::catalogue::SnapshotSource::Dump;
      else if (s == "synthetic") provenance.source = al::catalogue::SnapshotSource::Synthetic;
      else throw al::Error(al::ErrorCode::InvalidArgument, "source must be harvest, dump or synthetic");
    }
    if (taken_at && *taken_at) {
      auto t = timestamp_arg(taken_at, "taken_at");
      provenance.taken_at = al::format_utc_timestamp(*t);
    }
    auto raws = al::oai::ingest_dump(raw_path);
    auto tree = al::catalogue::load_category_tree(tree_path);
    auto built = al::catalogue::build_snapshot(raws, std::move(tree), options, provenance);
    al::catalogue::save_snapshot(*built.snapshot, out_dir);
    set_out(summary_json, al::catalogue::summary_json(built.summary));
    return AL_OK;
  });
}

AL_API al_status al_generate_corpus(const char* spec_json, long long seed, const char* raw_path, const char* tree_path,
                                    const char* truth_path, char** truth_json) {
  return guarded([&] {
    if (auto s = require(spec_json, "spec_json"); s != AL_OK) return s;
    auto spec = al::catalogue::CorpusSpec::from_json(spec_json);
    if (seed >= 0) spec.seed = static_cast<std::uint64_t>(seed);
    const auto corpus = al::catalogue::generate_corpus(spec);
    const std::string truth = corpus.truth.to_json(spec);
    if (raw_path && *raw_path) al::text::write_file(raw_path, al::oai::to_export(corpus.raws));
    if (tree_path && *tree_path) al::text::write_file(tree_path, al::catalogue::serialize_category_tree(corpus.tree));
    if (truth_path && *truth_path) al::text::write_file(truth_path, truth);
    set_out(truth_json, truth);
    return AL_OK;
  });
}

AL_API al_status al_snapshot_load(const char* dir, al_snapshot** out) {
  return guarded([&] {
    if (auto s = require(dir, "dir"); s != AL_OK) return s;
    if (auto s = require(out, "out"); s != AL_OK) return s;
    *out = new al_snapshot{al::catalogue::load_snapshot(dir)};
    return AL_OK;
  });
}

AL_API void al_snapshot_free(al_snapshot* snapshot) { delete snapshot; }

AL_API size_t al_snapshot_record_count(const al_snapshot* snapshot) {
  return snapshot ? snapshot->snapshot->records().size() : 0;
}

AL_API al_status al_snapshot_report_json(const al_snapshot* snapshot, const char* report, const char* argument,
                                         char** out) {
  return guarded([&] {
    if (auto s = require(snapshot, "snapshot"); s != AL_OK) return s;
    if (auto s = require(report, "report"); s != AL_OK) return s;
    if (auto s = require(out, "out"); s != AL_OK) return s;
    const auto& snap = *snapshot->snapshot;
    const std::string_view kind(report);
    if (kind == "stats") set_out(out, al::analytics::to_json(al::analytics::collection_stats(snap)));
    else if (kind == "histogram")
      set_out(out, al::analytics::histogram_json(al::analytics::multi_assignment_histogram(snap)));
    else if (kind == "rollups") set_out(out, al::analytics::to_json(al::analytics::rollup_counts(snap)));
    else if (kind == "depositors") set_out(out, al::analytics::to_json(al::analytics::depositor_profiles(snap)));
    else if (kind == "breakdown") {
      std::optional<std::string_view> exclude;
      if (argument && *argument) exclude = argument;
      set_out(out, al::analytics::to_json(al::analytics::access_breakdown_by_category(snap, exclude)));
    } else {
      throw al::Error(al::ErrorCode::InvalidArgument, "unknown report " + std::string(kind));
    }
    return AL_OK;
  });
}

AL_API al_status al_snapshot_stats_json(const al_snapshot* snapshot, char** out) {
  return al_snapshot_report_json(snapshot, "stats", nullptr, out);
}

AL_API al_status al_snapshot_consistency_json(const al_snapshot* snapshot, const char* embargo_path, char** out) {
  return guarded([&] {
    if (auto s = require(snapshot, "snapshot"); s != AL_OK) return s;
    if (auto s = require(out, "out"); s != AL_OK) return s;
    const auto report = al::analytics::driver_consistency_check(*snapshot->snapshot, embargo_arg(embargo_path));
    set_out(out, al::analytics::to_json(report));
    return AL_OK;
  });
}

AL_API al_status al_layout(const al_snapshot* snapshot, const char* kind, const char* group, const char* exclude,
                           const char* mode, char** json_out, char** svg_out) {
  return guarded([&] {
    if (auto s = require(snapshot, "snapshot"); s != AL_OK) return s;
    if (auto s = require(kind, "kind"); s != AL_OK) return s;
    if (auto s = require(json_out, "json_out"); s != AL_OK) return s;
    const auto& snap = *snapshot->snapshot;
    const std::string_view k(kind);
    std::string json, svg;
    if (k == "treemap") {
      al::layout::TreemapQuery query;
      if (group && *group) {
        auto g = al::layout::parse_group_key(group);
        if (!g) throw al::Error(al::ErrorCode::InvalidArgument, std::string("group must be category or depositor, got ") + group);
        query.group = *g;
      }
      if (exclude && *exclude) query.exclude = exclude;
      query.mode = mode_arg(mode, al::analytics::RollupMode::Assignment);
      const auto layout = al::layout::snapshot_treemap(snap, query);
      json = al::layout::to_json(layout);
      if (svg_out) svg = al::layout::to_svg(layout);
    } else if (k == "circlepack") {
      const auto layout = al::layout::snapshot_circle_pack(snap, mode_arg(mode, al::analytics::RollupMode::Unique));
      json = al::layout::to_json(layout);
      if (svg_out) svg = al::layout::to_svg(layout);
    } else if (k == "tree") {
      al::layout::TreeLayoutOptions options;
      options.mode = mode_arg(mode, al::analytics::RollupMode::Unique);
      const auto layout = al::layout::snapshot_tree(snap, options);
      json = al::layout::to_json(layout);
      if (svg_out) svg = al::layout::to_svg(layout);
    } else {
      throw al::Error(al::ErrorCode::InvalidArgument, "kind must be treemap, circlepack or tree");
    }
    set_out(json_out, json);
    if (svg_out) set_out(svg_out, svg);
    return AL_OK;
  });
}

AL_API al_status al_service_create(const al_snapshot* snapshot, const char* embargo_path, al_service** out) {
  return guarded([&] {
    if (auto s = require(out, "out"); s != AL_OK) return s;
    *out = new al_service{std::make_shared<const al::service::ExplorerService>(
        snapshot ? snapshot->snapshot : nullptr, embargo_arg(embargo_path))};
    return AL_OK;
  });
}

AL_API void al_service_free(al_service* service) { delete service; }

AL_API al_status al_service_handle(const al_service* service, const char* path, const char* query, int* http_status,
                                   char** body) {
  return guarded([&] {
    if (auto s = require(service, "service"); s != AL_OK) return s;
    if (auto s = require(path, "path"); s != AL_OK) return s;
    httplib::Params raw;
    if (query && *query) httplib::detail::parse_query_text(std::string(query), raw);
    al::service::Params params;
    for (const auto& [k, v] : raw) params.emplace(k, v);
    const auto response = service->service->handle(path, params);
    if (http_status) *http_status = response.status;
    set_out(body, response.body);
    return AL_OK;
  });
}

AL_API al_status al_server_create(const al_service* service, const char* host, int port, const char* static_dir,
                                  int cors, al_server** out) {
  return guarded([&] {
    if (auto s = require(service, "service"); s != AL_OK) return s;
    if (auto s = require(out, "out"); s != AL_OK) return s;
    if (port < 0 || port > 65535) throw al::Error(al::ErrorCode::InvalidArgument, "port must lie in 0..65535");
    al::service::ServerOptions options;
    if (host && *host) options.host = host;
    options.port = port;
    if (static_dir && *static_dir) options.static_dir = static_dir;
    options.cors = cors != 0;
    *out = new al_server{al::service::HttpServer(service->service, options)};
    return AL_OK;
  });
}

AL_API al_status al_server_bind(al_server* server, int* bound_port) {
  return guarded([&] {
    if (auto s = require(server, "server"); s != AL_OK) return s;
    const int port = server->server.bind();
    if (bound_port) *bound_port = port;
    return AL_OK;
  });
}

AL_API al_status al_server_run(al_server* server) {
  return guarded([&] {
    if (auto s = require(server, "server"); s != AL_OK) return s;
    server->server.run();
    return AL_OK;
  });
}

AL_API void al_server_wait_until_ready(al_server* server) {
  if (server) server->server.wait_until_ready();
}

AL_API void al_server_stop(al_server* server) {
  if (server) server->server.stop();
}

AL_API void al_server_free(al_server* server) { delete server; }

}  // extern "C"
