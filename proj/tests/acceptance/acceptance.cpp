// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "analytics/analytics.hpp"
#include "catalogue/corpus_generator.hpp"
#include "catalogue/dataset_record.hpp"
#include "catalogue/snapshot.hpp"
#include "common/text.hpp"
#include "corpora.hpp"
#include "layout/circle_pack.hpp"
#include "layout/treemap.hpp"
#include "oai/list_records_parser.hpp"
#include "oai/mock_endpoint.hpp"
#include "oai/raw_record.hpp"
#include "oracles.hpp"
#include "process.hpp"
#include "service/explorer_service.hpp"

using namespace archive_lens;
using nlohmann::json;
namespace fs = std::filesystem;
using layout::Circle;
using layout::Rect;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kCli = AL_CLI;
const fs::path kFixtures = AL_FIXTURES;

// Collects the first few failure messages of one criterion.
struct Verdict {
  std::size_t failures = 0;
  std::vector<std::string> notes;
  std::string summary;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (++failures <= 3) notes.push_back(what);
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

std::vector<std::vector<oai::RawRecord>> mock_pages() {
  std::vector<std::vector<oai::RawRecord>> pages(3);
  int i = 0;
  for (auto& page : pages)
    for (int k = 0; k < 5; ++k, ++i) {
      oai::RawRecord r;
      r.identifier = "oai:easy.dans.knaw.nl:easy-dataset:" + std::to_string(5000 + i);
      r.datestamp = "2012-01-12T10:27:57Z";
      r.set_specs = {"D30000:D34000"};
      r.deleted = i == 7;
      if (!r.deleted)
        r.dc_elements = {{"title", "Record " + std::to_string(i)},
                         {"creator", "Creator " + std::to_string(i % 3)},
                         {"rights", "OPEN_ACCESS"},
                         {"identifier", "easy-dataset:" + std::to_string(5000 + i)}};
      page.push_back(r);
    }
  return pages;
}

void oai_conformance(Verdict& v) {
  auto pages = mock_pages();
  oai::MockEndpointOptions options;
  options.fail_requests = {1};
  oai::MockOaiEndpoint mock(pages, options);
  mock.start();
  const auto out = proc::scratch() / "harvest.jsonl";
  const auto t0 = Clock::now();
  auto r = proc::run(kCli, {"harvest", "--endpoint", mock.base_url(), "--out", out.string()});
  const double secs = seconds_since(t0);
  v.expect(r.exit_code == 0, "exit code " + std::to_string(r.exit_code) + ": " + r.err);
  if (r.exit_code != 0) return;

  std::vector<std::string> expected;
  for (const auto& page : pages)
    for (const auto& rec : page) expected.push_back(oai::to_export_line(rec));
  auto got = lines_of(proc::slurp(out));
  std::sort(expected.begin(), expected.end());
  std::sort(got.begin(), got.end());
  v.expect(got == expected, "harvested multiset differs from the fixture");

  auto summary = json::parse(r.out);
  v.expect(summary["records"] == 15, "records " + summary["records"].dump());
  v.expect(summary["deleted"] == 1, "deleted " + summary["deleted"].dump());
  v.expect(summary["retries"] == 1, "retries " + summary["retries"].dump());
  v.expect(mock.request_log().size() == 4, "requests " + std::to_string(mock.request_log().size()));
  v.expect(secs < 5.0, "runtime " + fmt(secs) + " s");
  v.summary = std::to_string(got.size()) + " records, retries " + summary["retries"].dump() + ", " + fmt(secs) + " s";
}

void golden_parse(Verdict& v) {
  const auto xml = text::read_file(kFixtures / "easy_29142.xml");
  auto raws = oai::parse_record_sequence(xml);
  v.expect(raws.size() == 1, "record count " + std::to_string(raws.size()));
  if (raws.size() != 1) return;
  const auto& raw = raws[0];
  v.expect(oai::to_export_line(raw) == lines_of(text::read_file(kFixtures / "easy_29142.raw.jsonl")).at(0),
           "raw export line differs");

  auto tree = catalogue::load_category_tree(kFixtures / "easy_tree.csv");
  auto result = catalogue::normalize(raw, tree);
  v.expect(std::holds_alternative<catalogue::DatasetRecord>(result), "record did not normalize");
  if (!std::holds_alternative<catalogue::DatasetRecord>(result)) return;
  const auto& rec = std::get<catalogue::DatasetRecord>(result);
  v.expect(rec.easy_id == "easy-dataset:29142", "easy_id " + rec.easy_id);
  v.expect(rec.categories.size() == 1 && rec.categories[0].codes().size() == 3, "setSpec path depth");
  v.expect(rec.titles.size() == 2, "title count");
  v.expect(rec.access == catalogue::AccessClass::Other, "access class");
  v.expect(rec.persistent_id == std::optional<std::string>("urn:nbn:nl:ui:13-86i-k0w"), "persistent id");
  v.expect(catalogue::to_json_line(rec) == lines_of(text::read_file(kFixtures / "easy_29142.record.jsonl")).at(0),
           "normalized record line differs");
  v.summary = "raw and normalized lines byte-identical";
}

void full_profile(Verdict& v) {
  const auto d = proc::scratch() / "profile";
  fs::remove_all(d);
  fs::create_directories(d);
  const auto t0 = Clock::now();
  auto run = [&](std::vector<std::string> args) {
    auto r = proc::run(kCli, args);
    v.expect(r.exit_code == 0, args[0] + " exit " + std::to_string(r.exit_code) + ": " + r.err);
    return r;
  };
  if (run({"gen", "--spec", (kFixtures / "full_profile.json").string(), "--out-raw", (d / "raw.jsonl").string(),
           "--out-tree", (d / "tree.csv").string(), "--out-truth", (d / "truth.json").string()})
          .exit_code != 0)
    return;
  if (run({"build", "--raw", (d / "raw.jsonl").string(), "--tree", (d / "tree.csv").string(), "--out",
           (d / "snap").string()})
          .exit_code != 0)
    return;
  const std::string snap = (d / "snap").string();
  auto stats = json::parse(run({"stats", "--snapshot", snap}).out);
  auto hist = json::parse(run({"stats", "--snapshot", snap, "--report", "histogram"}).out);
  auto rollups = json::parse(run({"stats", "--snapshot", snap, "--report", "rollups"}).out);
  auto deps = json::parse(run({"stats", "--snapshot", snap, "--report", "depositors"}).out);
  auto breakdown = json::parse(run({"stats", "--snapshot", snap, "--report", "breakdown"}).out);
  auto check = json::parse(run({"check", "--snapshot", snap}).out);
  const double secs = seconds_since(t0);
  auto truth = json::parse(proc::slurp(d / "truth.json"));

  auto eq = [&](const json& got, long long want, const std::string& what) {
    v.expect(got == want, what + " = " + got.dump() + ", want " + std::to_string(want));
  };
  eq(stats["nRecords"], 21303, "records");
  eq(stats["nCategoriesUsed"], 47, "used categories");
  eq(stats["maxCategoriesPerRecord"], 9, "max arity");
  eq(stats["nAssignments"], 24993, "assignments");
  eq(breakdown["expansionTotal"], 24993, "breakdown expansion");
  eq(check["nDifferences"], 155, "driver differences");
  eq(stats["nSingleCategory"], truth["nSingleCategory"].get<long long>(), "single-category");
  v.expect(hist["histogram"] == truth["histogram"], "histogram differs from the planted one");
  v.expect(stats["perAccessClass"] == truth["perAccessClass"], "access classes differ");
  eq(stats["nDepositors"], truth["nDepositors"].get<long long>(), "depositors");
  v.expect(rollups["rollups"] == truth["rollups"], "rollups differ from the planted ones");
  const auto dominant = truth["dominantCode"].get<std::string>();
  const long long dom = rollups["rollups"][dominant]["unique"].get<long long>();
  eq(rollups["rollups"][dominant]["unique"], truth["dominantUniqueRollup"].get<long long>(), "dominant rollup");
  v.expect(std::abs(static_cast<double>(dom) / 21303 - 0.70) <= 1.0 / 21303, "dominant share " + fmt(dom / 21303.0));
  v.expect(!deps["depositors"].empty() && deps["depositors"][0]["creator"] == truth["topDepositor"] &&
               deps["depositors"][0]["nDatasets"] == truth["topDepositorDatasets"],
           "top depositor differs");
  v.expect(secs < 60.0, "runtime " + fmt(secs) + " s");
  v.summary = "21303 records, 47 categories, 24993 assignments, arity 9, single " + stats["nSingleCategory"].dump() +
              ", dominant " + fmt(dom / 21303.0) + ", 155 differences, " + fmt(secs) + " s";
}

void rollup_oracle(Verdict& v) {
  std::mt19937_64 rng(20240611);
  std::size_t checked_nodes = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto tree = corpora::random_tree(rng, 40);
    const int n = 1 + static_cast<int>(rng() % 1000);
    auto records = corpora::random_records(rng, tree, n);
    auto table = analytics::rollup_counts(tree, records);
    v.expect(table.entries() == oracle::rollups(tree, records), "oracle mismatch in corpus " + std::to_string(trial));
    for (const auto& node : tree.nodes()) {
      const auto& e = table.at(node.code);
      std::size_t sum = e.direct;
      for (const auto& c : node.children) sum += table.at(c).assignment;
      v.expect(e.assignment == sum, "identity broken at " + node.code);
      ++checked_nodes;
    }
  }
  v.summary = "100 corpora, " + std::to_string(checked_nodes) + " nodes";
}

void treemap_properties(Verdict& v) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> wd(1e-3, 1e3), side(0.1, 500);
  double worst_area = 0, worst_prop = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 60;
    std::vector<double> w(n);
    for (auto& x : w) x = trial % 4 == 0 ? static_cast<double>(1 + rng() % 20) : wd(rng);
    const Rect vp{wd(rng) - 500, wd(rng) - 500, side(rng), side(rng)};
    auto rects = layout::squarify(w, vp);
    if (rects.size() != n) {
      v.expect(false, "cell count");
      continue;
    }
    double area = 0;
    for (const auto& r : rects) area += r.area();
    worst_area = std::max(worst_area, std::abs(area - vp.area()) / vp.area());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double got = rects[i].area() / rects[j].area(), want = w[i] / w[j];
        worst_prop = std::max(worst_prop, std::abs(got - want) / want);
      }
    // Integer vectors scale exactly by any integer; real ones only by powers of two.
    const bool integral = trial % 4 == 0;
    for (double k : integral ? std::vector<double>{3.0, 7.0, 1e6, 0.125} : std::vector<double>{0.125, 4.0, 1048576.0}) {
      auto scaled = w;
      for (auto& x : scaled) x *= k;
      v.expect(layout::squarify(scaled, vp) == rects, "not bit-identical under scale " + fmt(k));
    }
    const double sq = oracle::max_aspect(rects), sd = oracle::max_aspect(oracle::slice_and_dice(w, vp));
    // Ties where both layouts coincide differ in the last ulps.
    v.expect(sq <= sd * (1 + 1e-12), "aspect " + fmt(sq) + " > slice-and-dice " + fmt(sd) + " in trial " + std::to_string(trial));
  }
  v.expect(worst_area <= 1e-9, "area error " + fmt(worst_area));
  v.expect(worst_prop <= 1e-9, "proportionality error " + fmt(worst_prop));
  v.summary = "1000 vectors, max area err " + fmt(worst_area) + ", max ratio err " + fmt(worst_prop);
}

void check_pack(Verdict& v, const layout::CirclePackLayout& l, const analytics::RollupTable& sizes,
                analytics::RollupMode mode) {
  const auto& nodes = l.nodes;
  std::vector<int> parent(nodes.size(), -1), stack;
  std::vector<bool> has_child(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    while (!stack.empty() && nodes[static_cast<std::size_t>(stack.back())].depth >= nodes[i].depth) stack.pop_back();
    if (!stack.empty()) {
      parent[i] = stack.back();
      has_child[static_cast<std::size_t>(stack.back())] = true;
    }
    stack.push_back(static_cast<int>(i));
  }
  v.expect(std::abs(nodes[0].circle.r - 1) < 1e-12, "root radius");
  double ratio = -1;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& c = nodes[i].circle;
    if (parent[i] >= 0) {
      const auto& p = nodes[static_cast<std::size_t>(parent[i])].circle;
      v.expect(std::hypot(c.cx - p.cx, c.cy - p.cy) + c.r <= p.r + 1e-9, "child outside parent");
      for (std::size_t j = i + 1; j < nodes.size(); ++j)
        if (parent[j] == parent[i]) {
          const auto& d = nodes[j].circle;
          v.expect(std::hypot(c.cx - d.cx, c.cy - d.cy) >= c.r + d.r - 1e-9, "siblings overlap");
        }
    }
    if (has_child[i] || nodes[i].code.empty()) continue;
    const double size = static_cast<double>(sizes.at(nodes[i].code).size(mode));
    if (ratio < 0) ratio = c.r * c.r / size;
    else v.expect(std::abs(c.r * c.r / size - ratio) <= 1e-7 * ratio, "leaf area not proportional");
  }
}

void circle_pack_properties(Verdict& v) {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    auto snap = corpora::random_snapshot(rng, 40, 1 + static_cast<int>(rng() % 500));
    auto sizes = analytics::rollup_counts(*snap);
    for (auto mode : {analytics::RollupMode::Unique, analytics::RollupMode::Assignment})
      check_pack(v, layout::circle_pack(snap->tree(), sizes, mode), sizes, mode);
  }

  std::vector<Circle> three{{0, 0, 1}, {0, 0, 1}, {0, 0, 1}};
  const double want = 1 + 2 / std::sqrt(3.0);
  const double got = layout::pack_siblings(three).r;
  v.expect(std::abs(got - want) <= 1e-9 * want, "three equal children radius " + fmt(got));

  std::uniform_real_distribution<double> pos(-50, 50), rad(0.01, 10);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Circle> cs(1 + rng() % 25);
    for (auto& c : cs) c = {pos(rng), pos(rng), rad(rng)};
    const double e = layout::enclosing_circle(cs).r, o = oracle::enclosing_circle(cs).r;
    worst = std::max(worst, std::abs(e - o) / o);
  }
  v.expect(worst <= 1e-7, "enclosing circle off by " + fmt(worst));
  v.summary = "200 packs, enclosing circle max rel err " + fmt(worst);
}

void service_integrity(Verdict& v) {
  catalogue::CorpusSpec spec;
  spec.n_unique = 600;
  spec.tree = {5, 3, 2, {}};
  spec.n_categories_used = 25;
  spec.multi_assignment_histogram = {{1, 480}, {2, 100}, {3, 20}};
  spec.rights_mix = {{catalogue::AccessClass::Open, 0.6}, {catalogue::AccessClass::Restricted, 0.4}};
  spec.depositor_powerlaw = {20, "Veteran Institute", 200, 1.0, 0.0};
  spec.driver_error_count = 12;
  spec.embargoed_count = 4;
  spec.n_quarantined = 5;
  spec.seed = 31;
  auto corpus = catalogue::generate_corpus(spec);
  auto snap = catalogue::build_snapshot(corpus.raws, corpus.tree).snapshot;
  service::ExplorerService svc(snap);

  const std::vector<std::pair<std::string, service::Params>> requests = {
      {"/api/stats", {}},
      {"/api/treemap", {}},
      {"/api/treemap", {{"group", "depositor"}}},
      {"/api/treemap", {{"mode", "assignment"}, {"level", "1"}}},
      {"/api/circlepack", {}},
      {"/api/tree", {}},
      {"/api/breakdown", {}},
      {"/api/consistency", {}},
      {"/api/search", {{"q", corpus.truth.search_token}}},
  };
  for (const auto& [path, params] : requests) {
    const auto first = svc.handle(path, params);
    v.expect(first.status == 200, path + " status " + std::to_string(first.status));
    for (int k = 0; k < 3; ++k) v.expect(svc.handle(path, params).body == first.body, path + " not byte-identical");
  }

  std::set<std::string> quarantined, tree_codes;
  for (const auto& q : snap->quarantine()) quarantined.insert(q.reason.easy_id);
  v.expect(!quarantined.empty(), "no quarantined records planted");
  const auto tree_doc = json::parse(svc.handle("/api/tree", {}).body);
  for (const auto& n : tree_doc["nodes"]) tree_codes.insert(n["code"]);
  std::size_t refs = 0;
  service::Params by_depositor;
  by_depositor["group"] = "depositor";
  for (const auto& params : std::vector<service::Params>{{}, by_depositor}) {
    const auto doc = json::parse(svc.handle("/api/treemap", params).body);
    for (const auto& cell : doc["cells"]) {
      const auto id = cell["ref"]["dataset"].get<std::string>();
      v.expect(svc.handle("/api/dataset/" + id, {}).status == 200, "dangling dataset ref " + id);
      v.expect(!quarantined.count(id), "quarantined record in treemap " + id);
      if (cell["ref"].contains("path"))
        for (const auto& code : text::split(cell["ref"]["path"].get<std::string>(), ':'))
          v.expect(tree_codes.count(code) > 0, "dangling category ref " + code);
      ++refs;
    }
  }
  const auto pack_doc = json::parse(svc.handle("/api/circlepack", {}).body);
  for (const auto& n : pack_doc["nodes"]) {
    const auto code = n["code"].get<std::string>();
    v.expect(code.empty() || tree_codes.count(code) > 0, "dangling circle ref " + code);
  }
  for (const auto& id : quarantined) {
    v.expect(svc.handle("/api/dataset/" + id, {}).status == 404, "quarantined dataset served " + id);
    const auto hits = json::parse(svc.handle("/api/search", {{"q", id}}).body)["hits"];
    v.expect(std::find(hits.begin(), hits.end(), id) == hits.end(), "quarantined record in search " + id);
  }
  const auto planted = json::parse(svc.handle("/api/search", {{"q", corpus.truth.search_token}}).body)["hits"];
  v.expect(planted.size() == 1 && planted[0] == corpus.truth.search_easy_id, "planted token search");

  auto raws = oai::parse_record_sequence(text::read_file(kFixtures / "easy_29142.xml"));
  auto listing = catalogue::build_snapshot(raws, catalogue::load_category_tree(kFixtures / "easy_tree.csv")).snapshot;
  service::ExplorerService listing_svc(listing);
  const auto hits = json::parse(listing_svc.handle("/api/search", {{"q", "Burgundisation"}}).body)["hits"];
  v.expect(hits.size() == 1 && hits[0] == "easy-dataset:29142", "title token search " + hits.dump());
  v.summary = std::to_string(requests.size()) + " endpoints repeatable, " + std::to_string(refs) + " cell refs, " +
              std::to_string(quarantined.size()) + " quarantined hidden";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria = {
      {"oai-conformance", oai_conformance},       {"golden-parse", golden_parse},
      {"full-profile-pipeline", full_profile}, {"rollup-oracle", rollup_oracle},
      {"treemap-properties", treemap_properties}, {"circle-pack-properties", circle_pack_properties},
      {"service-integrity", service_integrity},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      check(v);
    } catch (const std::exception& e) {
      v.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = v.failures == 0;
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS " : "FAIL ") << name;
    if (ok) std::cout << ": " << v.summary;
    else {
      std::cout << ": " << v.failures << " failed check(s)";
      for (const auto& n : v.notes) std::cout << "; " << n;
    }
    std::cout << std::endl;
  }
  std::error_code ec;
  fs::remove_all(proc::scratch(), ec);
  return failed == 0 ? 0 : 1;
}
