#pragma once

#include <span>
#include <string>
#include <vector>

#include "analytics/analytics.hpp"
#include "layout/geometry.hpp"

namespace archive_lens::layout {

/// Smallest circle containing every input circle. Throws Error(EmptyInput).
Circle enclosing_circle(std::span<const Circle> circles);

/// Places circles (radii given, centers ignored) as mutually tangent
/// siblings in input order, the first two on the x-axis. Returns the
/// enclosing circle; positions are written back relative to its center.
Circle pack_siblings(std::vector<Circle>& circles);

struct PackedNode {
  std::string code;  // empty for the synthetic root that holds several top-level nodes
  Circle circle;
  int depth = 0;

  bool operator==(const PackedNode&) const = default;
};

struct CirclePackLayout {
  std::vector<PackedNode> nodes;  // pre-order, children by size descending then code

  bool operator==(const CirclePackLayout&) const = default;
};

struct CirclePackOptions {
  /// Gap between a parent's children and its rim, as a fraction of the parent
  /// radius. Must lie in [0, 1).
  double padding = 0.03;
};

/// Nodes with a zero count in `mode` are omitted. A node with direct
/// assignments and displayed children reserves an unlabelled slot of that
/// size beside them. Root normalized to radius 1 at the origin.
/// Throws Error(EmptyTree) when nothing is displayed.
CirclePackLayout circle_pack(const analytics::CategoryTree& tree, const analytics::RollupTable& sizes,
                             analytics::RollupMode mode, const CirclePackOptions& options = {});

}  // namespace archive_lens::layout
