#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "analytics/analytics.hpp"
#include "layout/circle_pack.hpp"
#include "layout/tree_layout.hpp"
#include "layout/treemap.hpp"

namespace archive_lens::layout {

enum class GroupKey { Category, Depositor };
std::optional<GroupKey> parse_group_key(std::string_view text);
std::string_view to_string(GroupKey key);

struct TreemapQuery {
  GroupKey group = GroupKey::Category;
  std::optional<std::string> exclude;
  analytics::RollupMode mode = analytics::RollupMode::Assignment;
  int level = 1;  // category grouping: tree depth of the group node
  Rect viewport{0, 0, 1000, 600};
  TreemapOptions options;
};

/// One unit-weight cell per assignment (mode=assignment) or per record and
/// group (mode=unique), colored by access class. Category cells reference
/// (dataset, path); depositor cells reference the dataset. Throws
/// Error(UnknownCategory) for a bad exclude code and Error(InvalidArgument)
/// for a level outside 1..3. Nothing left to draw gives an empty layout.
TreemapLayout snapshot_treemap(const analytics::Snapshot& snapshot, const TreemapQuery& query);

CirclePackLayout snapshot_circle_pack(const analytics::Snapshot& snapshot, analytics::RollupMode mode,
                                      const CirclePackOptions& options = {});

TreeLayout snapshot_tree(const analytics::Snapshot& snapshot, const TreeLayoutOptions& options = {});

}  // namespace archive_lens::layout
