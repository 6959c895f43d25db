#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "layout/geometry.hpp"

namespace archive_lens::layout {

/// Squarified treemap. Output index i belongs to weights[i]; placement sorts
/// by weight descending (index breaks ties). Weights are normalized by their
/// maximum, so exactly proportional inputs give bit-identical rects.
/// Throws Error(EmptyInput), Error(NonPositiveWeight), Error(InvalidArgument)
/// for a degenerate viewport.
std::vector<Rect> squarify(std::span<const double> weights, const Rect& viewport);

struct CellRef {
  std::string dataset;
  std::optional<std::string> path;  // setSpec form, when the cell is one assignment

  bool operator==(const CellRef&) const = default;
};

struct TreemapItem {
  double weight = 1.0;
  CellRef ref;
  std::string color_class;
};

struct TreemapGroupInput {
  std::string key;
  std::string label;
  std::vector<TreemapItem> items;
};

struct TreemapCell {
  Rect rect;
  CellRef ref;
  double weight = 0;
  std::string color_class;

  bool operator==(const TreemapCell&) const = default;
};

struct TreemapGroup {
  std::string key;
  std::string label;
  Rect region;
  std::optional<Rect> header;
  std::size_t first = 0;  // index of the group's first cell
  std::size_t count = 0;
  double total = 0;

  bool operator==(const TreemapGroup&) const = default;
};

struct TreemapLayout {
  Rect viewport;
  std::vector<TreemapCell> cells;
  std::vector<TreemapGroup> groups;

  bool operator==(const TreemapLayout&) const = default;
};

struct TreemapOptions {
  double header_fraction = 0.06;
  /// The header is dropped when it would be thinner than this fraction of the
  /// viewport height.
  double min_header_fraction_of_viewport = 0.01;
};

TreemapLayout flat_treemap(std::vector<TreemapItem> items, const Rect& viewport);

/// Groups are ordered by total weight descending, then key. Throws
/// Error(EmptyInput) for no groups or an empty group.
TreemapLayout grouped_treemap(std::vector<TreemapGroupInput> groups, const Rect& viewport,
                              const TreemapOptions& options = {});

}  // namespace archive_lens::layout
