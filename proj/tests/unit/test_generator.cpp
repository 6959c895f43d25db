#include <doctest.h>

#include <filesystem>

#include "analytics/analytics.hpp"
#include "catalogue/corpus_generator.hpp"
#include "catalogue/snapshot.hpp"
#include "common/error.hpp"
#include "common/text.hpp"
#include "oai/raw_record.hpp"

using namespace archive_lens;
using namespace archive_lens::catalogue;
namespace fs = std::filesystem;

namespace {

CorpusSpec small_spec(int n) {
  CorpusSpec s;
  s.n_unique = n;
  s.multi_assignment_histogram = {{1, n}};
  s.n_categories_used = std::min(n, 10);
  s.depositor_powerlaw.count = 1;
  s.depositor_powerlaw.top_datasets = n;
  return s;
}

CorpusSpec full_profile() {
  return CorpusSpec::from_json(text::read_file(fs::path(AL_FIXTURES) / "full_profile.json"));
}

bool spec_error(const CorpusSpec& s) {
  try {
    generate_corpus(s);
  } catch (const Error& e) {
    return e.code() == ErrorCode::SpecError;
  }
  return false;
}

std::shared_ptr<const Snapshot> build(const Corpus& c) { return build_snapshot(c.raws, c.tree).snapshot; }

}  // namespace

TEST_CASE("ten single-category open records") {
  auto c = generate_corpus(small_spec(10));
  CHECK(c.truth.histogram == std::map<int, std::size_t>{{1, 10}});
  CHECK(c.truth.driver_differences == 0);
  auto snap = build(c);
  CHECK(snap->records().size() == 10);
  CHECK(analytics::driver_consistency_check(*snap).n_differences == 0);
  CHECK(analytics::multi_assignment_histogram(*snap) == std::map<int, std::size_t>{{1, 10}});
  for (const auto& r : snap->records()) CHECK(r.access == AccessClass::Open);
}

TEST_CASE("same spec and seed give identical bytes") {
  auto spec = small_spec(200);
  spec.multi_assignment_histogram = {{1, 150}, {2, 40}, {3, 10}};
  spec.driver_error_count = 12;
  spec.duplicate_factor = 1.3;
  spec.split_multi_category = true;
  spec.n_deleted = 5;
  spec.n_quarantined = 3;
  auto a = generate_corpus(spec);
  auto b = generate_corpus(spec);
  CHECK(oai::to_export(a.raws) == oai::to_export(b.raws));
  CHECK(a.truth.to_json(spec) == b.truth.to_json(spec));
  spec.seed = 2;
  CHECK(oai::to_export(generate_corpus(spec).raws) != oai::to_export(a.raws));
}

TEST_CASE("planted driver differences are found") {
  auto spec = small_spec(1000);
  spec.rights_mix = {{AccessClass::Open, 0.6}, {AccessClass::Restricted, 0.3}, {AccessClass::Other, 0.1}};
  spec.driver_error_count = 155;
  auto c = generate_corpus(spec);
  auto report = analytics::driver_consistency_check(*build(c));
  CHECK(report.n_differences == 155);
  CHECK(report.n_error == 155);
  std::vector<std::string> ids;
  for (const auto& d : report.differences) ids.push_back(d.easy_id);
  CHECK(ids == c.truth.difference_ids);
}

TEST_CASE("embargoed differences") {
  auto spec = small_spec(100);
  spec.driver_error_count = 10;
  spec.embargoed_count = 4;
  auto c = generate_corpus(spec);
  REQUIRE(c.truth.embargo_ids.size() == 4);
  std::set<std::string, std::less<>> embargo(c.truth.embargo_ids.begin(), c.truth.embargo_ids.end());
  auto report = analytics::driver_consistency_check(*build(c), embargo);
  CHECK(report.n_differences == 10);
  CHECK(report.n_explained_embargo == 4);
  CHECK(report.n_error == 6);
}

TEST_CASE("dominant branch share") {
  auto spec = small_spec(1000);
  spec.tree = {3, 3, 2, {}};
  spec.n_categories_used = 15;
  spec.dominant = CorpusSpec::Dominant{"D12000", 0.70};
  auto c = generate_corpus(spec);
  auto rollups = analytics::rollup_counts(*build(c));
  const double share = static_cast<double>(rollups.at("D12000").unique) / 1000.0;
  CHECK(std::abs(share - 0.70) <= 1.0 / 1000);
  CHECK(rollups.at("D12000").unique == c.truth.dominant_unique_rollup);
}

TEST_CASE("planted histogram 80/15/5") {
  auto spec = small_spec(100);
  spec.multi_assignment_histogram = {{1, 80}, {2, 15}, {3, 5}};
  spec.n_assignments = 125;
  auto c = generate_corpus(spec);
  auto stats = analytics::collection_stats(*build(c));
  CHECK(stats.pct_single_category == 0.80);
  CHECK(stats.n_assignments == 125);
  CHECK(stats.max_categories_per_record == 3);
  CHECK(stats.n_level_mixing == 0);
}

TEST_CASE("duplicates collapse to the unique count") {
  auto spec = small_spec(1000);
  spec.multi_assignment_histogram = {{1, 700}, {2, 200}, {3, 100}};
  spec.duplicate_factor = 1.27;
  spec.split_multi_category = true;
  auto c = generate_corpus(spec);
  CHECK(c.raws.size() > 1270);
  auto res = build_snapshot(c.raws, c.tree);
  CHECK(res.snapshot->records().size() == 1000);
  CHECK(res.summary.duplicates_removed == c.truth.duplicates_removed);
  CHECK(res.summary.conflicts.empty());
  CHECK(analytics::collection_stats(*res.snapshot).n_assignments == 1400);
}

TEST_CASE("infeasible specs are rejected") {
  CHECK(spec_error([] {
    auto s = small_spec(10);
    s.multi_assignment_histogram = {{1, 9}, {10, 1}};
    return s;
  }()));
  CHECK(spec_error([] {
    auto s = small_spec(10);
    s.multi_assignment_histogram = {{1, 9}};
    return s;
  }()));
  CHECK(spec_error([] {
    auto s = small_spec(10);
    s.rights_mix = {{AccessClass::Open, 0.5}};
    return s;
  }()));
  CHECK(spec_error([] {
    auto s = small_spec(10);
    s.driver_error_count = 11;
    return s;
  }()));
  CHECK(spec_error([] {
    auto s = small_spec(10);
    s.n_categories_used = 1000;
    return s;
  }()));
  CHECK(spec_error([] {
    auto s = small_spec(10);
    s.depositor_powerlaw.count = 5;
    s.depositor_powerlaw.top_datasets = 2;
    return s;
  }()));
  // Exactly 80% single-category cannot coexist with the 24,993 expansion.
  CHECK(spec_error([] {
    auto s = full_profile();
    s.multi_assignment_histogram = {{1, 17042}, {2, 4260}, {9, 1}};
    return s;
  }()));
  CHECK_THROWS_AS(CorpusSpec::from_json(R"({"n_unique": 3, "colour": "red"})"), Error);
  CHECK_THROWS_AS(CorpusSpec::from_json("not json"), Error);
}

TEST_CASE("spec json round-trip") {
  auto s = full_profile();
  CHECK(CorpusSpec::from_json(s.to_json()).to_json() == s.to_json());
  CHECK(s.n_unique == 21303);
  CHECK(s.n_assignments == 24993);
}

TEST_CASE("full profile truth matches the analytics") {
  auto spec = full_profile();
  auto c = generate_corpus(spec);
  auto res = build_snapshot(c.raws, c.tree);
  const auto& snap = *res.snapshot;
  auto stats = analytics::collection_stats(snap);
  const auto& t = c.truth;
  CHECK(stats.n_records == 21303);
  CHECK(stats.n_records == t.n_records);
  CHECK(stats.n_categories_used == 47);
  CHECK(stats.n_assignments == 24993);
  CHECK(stats.n_single_category == 17620);
  CHECK(stats.max_categories_per_record == 9);
  CHECK(stats.n_depositors == 1700);
  CHECK(stats.per_access_class == t.per_access_class);
  CHECK(stats.quarantine_count == 9);
  CHECK(stats.n_level_mixing == 0);
  CHECK(res.summary.deleted_skipped == 412);
  CHECK(res.summary.duplicates_removed == t.duplicates_removed);

  auto rollups = analytics::rollup_counts(snap);
  for (const auto& [code, truth] : t.rollups) {
    const auto& e = rollups.at(code);
    CHECK(e.direct == truth.direct);
    CHECK(e.assignment == truth.assignment);
    CHECK(e.unique == truth.unique);
  }
  CHECK(rollups.at("D37000").unique == t.dominant_unique_rollup);
  CHECK(std::abs(static_cast<double>(t.dominant_unique_rollup) / 21303 - 0.70) <= 1.0 / 21303);

  auto report = analytics::driver_consistency_check(snap);
  CHECK(report.n_differences == 155);

  auto profiles = analytics::depositor_profiles(snap);
  REQUIRE_FALSE(profiles.empty());
  CHECK(profiles[0].creator == "Veteran Institute");
  CHECK(profiles[0].n_datasets == 3000);

  auto breakdown = analytics::access_breakdown_by_category(snap);
  CHECK(breakdown.expansion_total == 24993);
  std::size_t rg_outside = 0;
  for (const auto& row : breakdown.rows)
    if (!snap.tree().in_subtree(row.code, "D37000"))
      rg_outside += row.direct[index_of(AccessClass::RestrictedGroup)];
  CHECK(rg_outside == 0);

  auto hit = snap.find(t.search_easy_id);
  REQUIRE(hit != nullptr);
}
