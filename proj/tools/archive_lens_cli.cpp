// archive-lens: harvest, build, inspect and serve archive snapshots.
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "archive_lens/archive_lens.h"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

int report(al_status status) {
  if (status == AL_OK) return kOk;
  std::cerr << "error: " << al_last_error_code() << ": " << al_last_error() << "\n";
  return status == AL_ERR_INVALID_ARGUMENT ? kUsage : kFailure;
}

// Owns a string returned by the library.
struct Owned {
  char* p = nullptr;
  ~Owned() { al_free_string(p); }
  std::string str() const { return p ? p : ""; }
};

struct SnapshotHandle {
  al_snapshot* p = nullptr;
  ~SnapshotHandle() { al_snapshot_free(p); }
};

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return kOk;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::cerr << "error: IoError: cannot write " << out_path << "\n";
    return kFailure;
  }
  return kOk;
}

std::string svg_path_for(const std::string& out) {
  const auto dot = out.find_last_of('.');
  const auto slash = out.find_last_of('/');
  std::string base = dot != std::string::npos && (slash == std::string::npos || dot > slash) ? out.substr(0, dot) : out;
  std::string svg = base + ".svg";
  return svg == out ? out + ".svg" : svg;
}

al_server* running_server = nullptr;

extern "C" void on_signal(int) {
  if (running_server) al_server_stop(running_server);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"archive-lens: OAI-PMH Dublin Core harvesting, snapshot analytics and visual-browsing layouts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(al_version()));

  // harvest
  auto* harvest = app.add_subcommand("harvest", "Harvest ListRecords (oai_dc) into a JSON-lines export");
  std::string endpoint, set, from, until, harvest_out, prefix;
  int max_pages = 0, attempts = 4, backoff_ms = 1000;
  double backoff_factor = 2.0;
  harvest->add_option("--endpoint", endpoint, "OAI-PMH base URL")->required();
  harvest->add_option("--set", set, "Restrict to one setSpec");
  harvest->add_option("--from", from, "Lower datestamp bound (UTC)");
  harvest->add_option("--until", until, "Upper datestamp bound (UTC)");
  harvest->add_option("--metadata-prefix", prefix, "Metadata format")->default_str("oai_dc");
  harvest->add_option("--max-pages", max_pages, "Stop after N pages (0 = all)")->check(CLI::NonNegativeNumber);
  harvest->add_option("--max-attempts", attempts, "Attempts per request")->check(CLI::PositiveNumber);
  harvest->add_option("--backoff-ms", backoff_ms, "Initial retry delay")->check(CLI::NonNegativeNumber);
  harvest->add_option("--backoff-factor", backoff_factor, "Retry delay multiplier");
  harvest->add_option("--out", harvest_out, "Output file")->required();

  // build
  auto* build = app.add_subcommand("build", "Normalize, deduplicate and store a snapshot");
  std::string raw, tree, build_out, rights, source, taken_at;
  build->add_option("--raw", raw, "Raw export (JSON lines or OAI-PMH XML)")->required();
  build->add_option("--tree", tree, "Category tree CSV (code,parent,label)")->required();
  build->add_option("--out", build_out, "Snapshot directory")->required();
  build->add_option("--rights", rights, "Rights mapping config (default: $ARCHIVE_LENS_CONFIG)");
  build->add_option("--source", source, "Provenance source")->check(CLI::IsMember({"harvest", "dump", "synthetic"}));
  build->add_option("--taken-at", taken_at, "Snapshot timestamp (default: latest datestamp)");

  // stats
  auto* stats = app.add_subcommand("stats", "Print collection statistics");
  std::string stats_snapshot, stats_out, stats_report = "stats", stats_exclude;
  stats->add_option("--snapshot", stats_snapshot, "Snapshot directory")->required();
  stats->add_option("--report", stats_report, "Report kind")
      ->check(CLI::IsMember({"stats", "histogram", "rollups", "depositors", "breakdown"}));
  stats->add_option("--exclude", stats_exclude, "Category excluded from the breakdown report");
  stats->add_option("--out", stats_out, "Write to file instead of stdout");

  // check
  auto* check = app.add_subcommand("check", "Cross-check the Driver set against access rights");
  std::string check_snapshot, check_embargo, check_out;
  check->add_option("--snapshot", check_snapshot, "Snapshot directory")->required();
  check->add_option("--embargo-list", check_embargo, "File of embargoed easy_ids, one per line");
  check->add_option("--out", check_out, "Write to file instead of stdout");

  // layout
  auto* layout = app.add_subcommand("layout", "Export a treemap, circle-pack or tree layout");
  std::string layout_snapshot, kind, group, exclude, mode, layout_out;
  bool svg = false;
  layout->add_option("--snapshot", layout_snapshot, "Snapshot directory")->required();
  layout->add_option("--kind", kind, "Layout kind")->required()->check(CLI::IsMember({"treemap", "circlepack", "tree"}));
  layout->add_option("--group", group, "Treemap grouping")->check(CLI::IsMember({"category", "depositor"}));
  layout->add_option("--exclude", exclude, "Category subtree to leave out of a treemap");
  layout->add_option("--mode", mode, "Rollup mode")->check(CLI::IsMember({"assignment", "unique"}));
  layout->add_option("--out", layout_out, "Layout JSON file")->required();
  layout->add_flag("--svg", svg, "Also write an SVG rendering next to --out");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic corpus with known ground truth");
  std::string spec, out_raw, out_tree, out_truth;
  long long seed = -1;
  gen->add_option("--spec", spec, "Corpus spec (JSON)")->required();
  gen->add_option("--seed", seed, "Override the spec's seed")->check(CLI::NonNegativeNumber);
  gen->add_option("--out-raw", out_raw, "Raw export output")->required();
  gen->add_option("--out-tree", out_tree, "Category tree output")->required();
  gen->add_option("--out-truth", out_truth, "Ground truth output")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the explorer API");
  std::string serve_snapshot, host = "127.0.0.1", static_dir, serve_embargo;
  int port = 8080;
  bool cors = false;
  serve->add_option("--snapshot", serve_snapshot, "Snapshot directory")->required();
  serve->add_option("--port", port, "TCP port (0 = any free port)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--static", static_dir, "Static UI directory mounted at /");
  serve->add_option("--embargo-list", serve_embargo, "File of embargoed easy_ids, one per line");
  serve->add_flag("--cors", cors, "Allow cross-origin requests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*harvest) {
    al_harvest_options o;
    al_harvest_options_init(&o);
    o.base_url = endpoint.c_str();
    o.metadata_prefix = opt(prefix);
    o.set_filter = opt(set);
    o.from = opt(from);
    o.until = opt(until);
    o.max_pages = max_pages;
    o.max_attempts = attempts;
    o.backoff_initial_ms = backoff_ms;
    o.backoff_factor = backoff_factor;
    Owned summary;
    if (int rc = report(al_harvest_to_file(&o, harvest_out.c_str(), &summary.p)); rc) return rc;
    std::cout << summary.str();
    return kOk;
  }

  if (*build) {
    if (rights.empty())
      if (const char* env = std::getenv("ARCHIVE_LENS_CONFIG")) rights = env;
    Owned summary;
    if (int rc = report(al_build_snapshot(raw.c_str(), tree.c_str(), opt(rights), opt(source), opt(taken_at),
                                          build_out.c_str(), &summary.p));
        rc)
      return rc;
    std::cout << summary.str();
    return kOk;
  }

  if (*gen) {
    std::ifstream in(spec, std::ios::binary);
    if (!in) {
      std::cerr << "error: IoError: cannot read " << spec << "\n";
      return kFailure;
    }
    std::stringstream text;
    text << in.rdbuf();
    return report(al_generate_corpus(text.str().c_str(), seed, out_raw.c_str(), out_tree.c_str(), out_truth.c_str(),
                                     nullptr));
  }

  SnapshotHandle snapshot;
  const std::string& dir = *stats ? stats_snapshot : *check ? check_snapshot : *layout ? layout_snapshot : serve_snapshot;
  if (int rc = report(al_snapshot_load(dir.c_str(), &snapshot.p)); rc) return rc;

  if (*stats) {
    Owned out;
    if (int rc = report(al_snapshot_report_json(snapshot.p, stats_report.c_str(), opt(stats_exclude), &out.p)); rc)
      return rc;
    return emit(out.str(), stats_out);
  }

  if (*check) {
    Owned out;
    if (int rc = report(al_snapshot_consistency_json(snapshot.p, opt(check_embargo), &out.p)); rc) return rc;
    return emit(out.str(), check_out);
  }

  if (*layout) {
    Owned json, rendering;
    if (int rc = report(al_layout(snapshot.p, kind.c_str(), opt(group), opt(exclude), opt(mode), &json.p,
                                  svg ? &rendering.p : nullptr));
        rc)
      return rc;
    if (int rc = emit(json.str(), layout_out); rc) return rc;
    if (svg) return emit(rendering.str(), svg_path_for(layout_out));
    return kOk;
  }

  // serve
  al_service* service = nullptr;
  if (int rc = report(al_service_create(snapshot.p, opt(serve_embargo), &service)); rc) return rc;
  al_server* server = nullptr;
  int rc = report(al_server_create(service, host.c_str(), port, opt(static_dir), cors ? 1 : 0, &server));
  int bound = 0;
  if (rc == kOk) rc = report(al_server_bind(server, &bound));
  if (rc == kOk) {
    std::cout << "listening on http://" << host << ":" << bound << "\n" << std::flush;
    running_server = server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    rc = report(al_server_run(server));
    running_server = nullptr;
  }
  al_server_free(server);
  al_service_free(service);
  return rc;
}
