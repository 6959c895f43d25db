#include <json.hpp>

#include "analytics/analytics.hpp"

namespace archive_lens::analytics {

using nlohmann::json;

namespace {

json class_counts(const ClassCounts& counts) {
  json j = json::object();
  for (auto c : catalogue::kAccessClasses) j[std::string(catalogue::to_string(c))] = counts[catalogue::index_of(c)];
  return j;
}

std::string finish(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string to_json(const CollectionStats& s) {
  json j;
  j["nRecords"] = s.n_records;
  j["nCategoriesUsed"] = s.n_categories_used;
  j["nTreeNodes"] = s.n_tree_nodes;
  j["nDepositors"] = s.n_depositors;
  j["nAssignments"] = s.n_assignments;
  j["nSingleCategory"] = s.n_single_category;
  j["pctSingleCategory"] = s.pct_single_category;
  j["maxCategoriesPerRecord"] = s.max_categories_per_record;
  j["perAccessClass"] = class_counts(s.per_access_class);
  j["quarantineCount"] = s.quarantine_count;
  j["nLevelMixing"] = s.n_level_mixing;
  return finish(j);
}

std::string to_json(const RollupTable& table) {
  json j = json::object();
  for (const auto& [code, e] : table.entries())
    j[code] = {{"direct", e.direct}, {"assignment", e.assignment}, {"unique", e.unique}};
  return finish(json{{"rollups", j}});
}

std::string histogram_json(const std::map<int, std::size_t>& histogram) {
  json j = json::object();
  for (const auto& [arity, count] : histogram) j[std::to_string(arity)] = count;
  return finish(json{{"histogram", j}});
}

std::string to_json(const std::vector<DepositorProfile>& profiles, std::size_t limit) {
  json list = json::array();
  std::size_t singletons = 0;
  for (const auto& p : profiles) {
    if (p.n_datasets == 1) ++singletons;
    if (limit && list.size() >= limit) continue;
    list.push_back({{"creator", p.creator},
                    {"nDatasets", p.n_datasets},
                    {"perAccessClass", class_counts(p.per_access_class)},
                    {"categories", p.categories}});
  }
  return finish(json{{"depositors", list}, {"nDepositors", profiles.size()}, {"nSingletons", singletons}});
}

std::string to_json(const AccessBreakdown& b) {
  json rows = json::array();
  for (const auto& r : b.rows)
    rows.push_back({{"code", r.code}, {"direct", class_counts(r.direct)}, {"rolled", class_counts(r.rolled)}});
  return finish(json{{"exclude", b.exclude ? json(*b.exclude) : json(nullptr)},
                     {"rows", rows},
                     {"totals", class_counts(b.totals)},
                     {"expansionTotal", b.expansion_total}});
}

std::string to_json(const ConsistencyReport& report) {
  json diffs = json::array();
  for (const auto& d : report.differences)
    diffs.push_back({{"easyId", d.easy_id},
                     {"inDriver", d.in_driver},
                     {"access", catalogue::to_string(d.access)},
                     {"classification", to_string(d.classification)}});
  return finish(json{{"differences", diffs},
                     {"nDifferences", report.n_differences},
                     {"nExplainedEmbargo", report.n_explained_embargo},
                     {"nError", report.n_error}});
}

}  // namespace archive_lens::analytics
