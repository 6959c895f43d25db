#pragma once

#include <optional>
#include <string>
#include <vector>

#include "analytics/analytics.hpp"

namespace archive_lens::layout {

struct TreeNodeLayout {
  std::string code;
  std::string label;
  std::optional<std::string> parent;
  int depth = 1;
  double x = 0, y = 0;
  double r = 0;  // size circle
  std::size_t size = 0;

  bool operator==(const TreeNodeLayout&) const = default;
};

struct TreeLayout {
  std::vector<TreeNodeLayout> nodes;  // pre-order, siblings by size descending then code
  double width = 0, height = 0;

  bool operator==(const TreeLayout&) const = default;
};

struct TreeLayoutOptions {
  analytics::RollupMode mode = analytics::RollupMode::Unique;
  double level_gap = 180;  // x distance between depths
  double max_radius = 28;  // radius of the largest node
  double min_extent = 6;   // half-height reserved for small or empty nodes
  double gap = 4;          // vertical clearance between neighbours at one depth
};

/// Left-to-right layered layout: x from depth, y from a contour-merging
/// placement where each parent sits midway between its first and last child.
TreeLayout tidy_tree_layout(const analytics::CategoryTree& tree, const analytics::RollupTable& sizes,
                            const TreeLayoutOptions& options = {});

}  // namespace archive_lens::layout
