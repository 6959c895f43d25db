#include "layout/views.hpp"

#include <map>
#include <set>

#include "common/error.hpp"

namespace archive_lens::layout {

std::optional<GroupKey> parse_group_key(std::string_view text) {
  if (text == "category") return GroupKey::Category;
  if (text == "depositor") return GroupKey::Depositor;
  return std::nullopt;
}

std::string_view to_string(GroupKey key) { return key == GroupKey::Category ? "category" : "depositor"; }

TreemapLayout snapshot_treemap(const analytics::Snapshot& snapshot, const TreemapQuery& query) {
  const auto& tree = snapshot.tree();
  if (query.exclude && !tree.contains(*query.exclude))
    throw Error(ErrorCode::UnknownCategory, "unknown category " + *query.exclude, *query.exclude);
  if (query.level < 1 || query.level > static_cast<int>(catalogue::kMaxTreeDepth))
    throw Error(ErrorCode::InvalidArgument, "level must lie in 1..3");
  const bool unique = query.mode == analytics::RollupMode::Unique;

  std::map<std::string, TreemapGroupInput> groups;
  auto add = [&](const std::string& key, const std::string& label, TreemapItem item) {
    auto& g = groups[key];
    if (g.items.empty()) {
      g.key = key;
      g.label = label;
    }
    g.items.push_back(std::move(item));
  };

  for (const auto& r : snapshot.records()) {
    const std::string color(catalogue::to_string(r.access));
    std::vector<const catalogue::CategoryPath*> kept;
    for (const auto& p : r.categories)
      if (!query.exclude || !p.contains(*query.exclude)) kept.push_back(&p);
    if (kept.empty()) continue;
    if (query.group == GroupKey::Category) {
      std::set<std::string> seen;
      for (const auto* p : kept) {
        const auto& codes = p->codes();
        const std::string& key = codes[std::min<std::size_t>(static_cast<std::size_t>(query.level), codes.size()) - 1];
        if (unique && !seen.insert(key).second) continue;
        add(key, tree.at(key).label, {1.0, {r.easy_id, p->to_string()}, color});
      }
    } else {
      std::set<std::string> seen;
      if (r.creators.empty()) {
        add("", "(no creator)", {1.0, {r.easy_id, std::nullopt}, color});
        continue;
      }
      for (const auto& c : r.creators) {
        if (!seen.insert(c).second) continue;
        add(c, c, {1.0, {r.easy_id, std::nullopt}, color});
        if (unique) break;
      }
    }
  }
  if (groups.empty()) return TreemapLayout{query.viewport, {}, {}};
  std::vector<TreemapGroupInput> list;
  list.reserve(groups.size());
  for (auto& [k, g] : groups) {
    // Cluster cells of one access class together inside each group.
    std::stable_sort(g.items.begin(), g.items.end(), [](const TreemapItem& a, const TreemapItem& b) {
      return catalogue::index_of(*catalogue::parse_access_class(a.color_class)) <
             catalogue::index_of(*catalogue::parse_access_class(b.color_class));
    });
    list.push_back(std::move(g));
  }
  return grouped_treemap(std::move(list), query.viewport, query.options);
}

CirclePackLayout snapshot_circle_pack(const analytics::Snapshot& snapshot, analytics::RollupMode mode,
                                      const CirclePackOptions& options) {
  return circle_pack(snapshot.tree(), analytics::rollup_counts(snapshot), mode, options);
}

TreeLayout snapshot_tree(const analytics::Snapshot& snapshot, const TreeLayoutOptions& options) {
  return tidy_tree_layout(snapshot.tree(), analytics::rollup_counts(snapshot), options);
}

}  // namespace archive_lens::layout
