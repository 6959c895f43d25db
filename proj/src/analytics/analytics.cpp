#include "analytics/analytics.hpp"

#include <algorithm>
#include <unordered_map>

#include "common/error.hpp"
#include "common/text.hpp"

namespace archive_lens::analytics {

using catalogue::index_of;

CollectionStats collection_stats(const CategoryTree& tree, std::span<const DatasetRecord> records,
                                 std::size_t quarantine_count) {
  CollectionStats s;
  s.n_records = records.size();
  s.n_tree_nodes = tree.size();
  s.quarantine_count = quarantine_count;
  std::set<std::string_view> used, creators;
  for (const auto& r : records) {
    s.n_assignments += r.categories.size();
    if (r.categories.size() == 1) ++s.n_single_category;
    s.max_categories_per_record = std::max(s.max_categories_per_record, r.categories.size());
    ++s.per_access_class[index_of(r.access)];
    for (const auto& p : r.categories) used.insert(p.leaf());
    for (const auto& c : r.creators) creators.insert(c);
    if (!catalogue::level_mixing_pairs(r).empty()) ++s.n_level_mixing;
  }
  s.n_categories_used = used.size();
  s.n_depositors = creators.size();
  s.pct_single_category =
      s.n_records ? static_cast<double>(s.n_single_category) / static_cast<double>(s.n_records) : 0.0;
  return s;
}

CollectionStats collection_stats(const Snapshot& snapshot) {
  return collection_stats(snapshot.tree(), snapshot.records(), snapshot.quarantine().size());
}

std::string_view to_string(RollupMode mode) { return mode == RollupMode::Assignment ? "assignment" : "unique"; }

std::optional<RollupMode> parse_rollup_mode(std::string_view text) {
  if (text == "assignment") return RollupMode::Assignment;
  if (text == "unique") return RollupMode::Unique;
  return std::nullopt;
}

const RollupEntry* RollupTable::find(std::string_view code) const {
  auto it = entries_.find(code);
  return it == entries_.end() ? nullptr : &it->second;
}

const RollupEntry& RollupTable::at(std::string_view code) const {
  if (const auto* e = find(code)) return *e;
  throw Error(ErrorCode::UnknownCategory, "unknown category " + std::string(code), std::string(code));
}

RollupTable rollup_counts(const CategoryTree& tree, std::span<const DatasetRecord> records) {
  RollupMap entries;
  for (const auto& node : tree.nodes()) entries.emplace(node.code, RollupEntry{});
  std::set<std::string_view> touched;
  for (const auto& r : records) {
    touched.clear();
    for (const auto& path : r.categories) {
      entries.at(path.leaf()).direct += 1;
      for (const auto& code : path.codes()) {
        entries.at(code).assignment += 1;
        touched.insert(code);
      }
    }
    for (auto code : touched) entries.find(code)->second.unique += 1;
  }
  return RollupTable(std::move(entries));
}

RollupTable rollup_counts(const Snapshot& snapshot) { return rollup_counts(snapshot.tree(), snapshot.records()); }

std::map<int, std::size_t> multi_assignment_histogram(std::span<const DatasetRecord> records) {
  std::map<int, std::size_t> h;
  for (const auto& r : records) {
    if (r.categories.size() > static_cast<std::size_t>(kMaxArity))
      throw Error(ErrorCode::ArityViolation,
                  r.easy_id + " carries " + std::to_string(r.categories.size()) + " categories (maximum 9)",
                  r.easy_id);
    ++h[static_cast<int>(r.categories.size())];
  }
  return h;
}

std::map<int, std::size_t> multi_assignment_histogram(const Snapshot& snapshot) {
  return multi_assignment_histogram(snapshot.records());
}

std::vector<DepositorProfile> depositor_profiles(std::span<const DatasetRecord> records) {
  std::map<std::string_view, DepositorProfile> by_name;
  std::map<std::string_view, std::set<std::string_view>> codes;
  for (const auto& r : records) {
    std::set<std::string_view> seen;
    for (const auto& c : r.creators) {
      if (!seen.insert(c).second) continue;
      auto& p = by_name[c];
      p.creator = c;
      ++p.n_datasets;
      ++p.per_access_class[index_of(r.access)];
      auto& cs = codes[c];
      for (const auto& path : r.categories)
        for (const auto& code : path.codes()) cs.insert(code);
    }
  }
  std::vector<DepositorProfile> out;
  out.reserve(by_name.size());
  for (auto& [name, p] : by_name) {
    for (auto code : codes[name]) p.categories.emplace_back(code);
    out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const DepositorProfile& a, const DepositorProfile& b) { return a.n_datasets > b.n_datasets; });
  return out;
}

std::vector<DepositorProfile> depositor_profiles(const Snapshot& snapshot) {
  return depositor_profiles(snapshot.records());
}

AccessBreakdown access_breakdown_by_category(const Snapshot& snapshot, std::optional<std::string_view> exclude) {
  const auto& tree = snapshot.tree();
  if (exclude && !tree.contains(*exclude))
    throw Error(ErrorCode::UnknownCategory, "unknown category " + std::string(*exclude), std::string(*exclude));
  AccessBreakdown b;
  if (exclude) b.exclude = std::string(*exclude);
  std::unordered_map<std::string_view, std::size_t> row_of;
  for (const auto& node : tree.nodes()) {
    row_of.emplace(node.code, b.rows.size());
    b.rows.push_back({node.code, {}, {}});
  }
  for (const auto& r : snapshot.records()) {
    const auto cls = index_of(r.access);
    for (const auto& path : r.categories) {
      if (exclude && path.contains(*exclude)) continue;
      ++b.expansion_total;
      ++b.totals[cls];
      ++b.rows[row_of.at(path.leaf())].direct[cls];
      for (const auto& code : path.codes()) ++b.rows[row_of.at(code)].rolled[cls];
    }
  }
  return b;
}

std::string_view to_string(Classification c) {
  return c == Classification::ExplainedEmbargo ? "explained_embargo" : "error";
}

ConsistencyReport driver_consistency_check(std::span<const DatasetRecord> records,
                                           const std::set<std::string, std::less<>>& embargo_ids) {
  ConsistencyReport report;
  for (const auto& r : records) {
    const bool open = r.access == AccessClass::Open;
    if (open == r.in_driver_set) continue;
    ConsistencyDifference d{r.easy_id, r.in_driver_set, r.access, Classification::Error};
    if (open && !r.in_driver_set && embargo_ids.count(r.easy_id)) d.classification = Classification::ExplainedEmbargo;
    report.differences.push_back(std::move(d));
  }
  std::sort(report.differences.begin(), report.differences.end(),
            [](const auto& a, const auto& b) { return a.easy_id < b.easy_id; });
  report.n_differences = report.differences.size();
  for (const auto& d : report.differences)
    ++(d.classification == Classification::ExplainedEmbargo ? report.n_explained_embargo : report.n_error);
  return report;
}

ConsistencyReport driver_consistency_check(const Snapshot& snapshot,
                                           const std::set<std::string, std::less<>>& embargo_ids) {
  return driver_consistency_check(snapshot.records(), embargo_ids);
}

std::set<std::string, std::less<>> parse_id_list(std::string_view content) {
  std::set<std::string, std::less<>> ids;
  for (const auto& line : text::lines(content)) {
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    ids.emplace(t);
  }
  return ids;
}

}  // namespace archive_lens::analytics
