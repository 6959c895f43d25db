#include "layout/tree_layout.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <unordered_map>

namespace archive_lens::layout {

namespace {

struct Extent {
  double top, bottom;
};

struct Subtree {
  std::size_t node;  // index into tree.nodes(), or npos for the virtual root
  double half = 0;   // own half-height
  std::vector<Subtree> children;
  std::vector<double> offsets;  // child y relative to this node
  std::vector<Extent> contour;  // per level, relative to this node's y
};

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

}  // namespace

TreeLayout tidy_tree_layout(const analytics::CategoryTree& tree, const analytics::RollupTable& sizes,
                            const TreeLayoutOptions& options) {
  TreeLayout out;
  if (tree.empty()) return out;
  const auto& nodes = tree.nodes();
  std::unordered_map<std::string_view, std::size_t> index;
  double max_size = 0;
  std::vector<std::size_t> size_of(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    index.emplace(nodes[i].code, i);
    const auto* e = sizes.find(nodes[i].code);
    size_of[i] = e ? e->size(options.mode) : 0;
    max_size = std::max(max_size, static_cast<double>(size_of[i]));
  }
  auto radius = [&](std::size_t i) {
    return max_size > 0 ? options.max_radius * std::sqrt(static_cast<double>(size_of[i]) / max_size) : 0.0;
  };
  auto ordered = [&](const std::vector<std::string>& codes) {
    std::vector<std::size_t> v;
    for (const auto& c : codes) v.push_back(index.at(c));
    std::stable_sort(v.begin(), v.end(), [&](std::size_t a, std::size_t b) {
      if (size_of[a] != size_of[b]) return size_of[a] > size_of[b];
      return nodes[a].code < nodes[b].code;
    });
    return v;
  };

  std::function<Subtree(std::size_t, const std::vector<std::size_t>&)> build =
      [&](std::size_t node, const std::vector<std::size_t>& kids) {
        Subtree t{node, node == kNone ? 0.0 : std::max(radius(node), options.min_extent), {}, {}, {}};
        for (auto k : kids) t.children.push_back(build(k, ordered(nodes[k].children)));
        // Stack children top to bottom, pushing each below the merged contour.
        std::vector<Extent> merged;
        std::vector<double> pos;
        for (const auto& c : t.children) {
          double shift = 0;
          if (!pos.empty()) {
            shift = -std::numeric_limits<double>::infinity();
            for (std::size_t l = 0; l < std::min(merged.size(), c.contour.size()); ++l)
              shift = std::max(shift, merged[l].bottom - c.contour[l].top + options.gap);
          }
          pos.push_back(shift);
          for (std::size_t l = 0; l < c.contour.size(); ++l) {
            Extent e{c.contour[l].top + shift, c.contour[l].bottom + shift};
            if (l < merged.size()) {
              merged[l].top = std::min(merged[l].top, e.top);
              merged[l].bottom = std::max(merged[l].bottom, e.bottom);
            } else {
              merged.push_back(e);
            }
          }
        }
        const double mid = pos.empty() ? 0.0 : (pos.front() + pos.back()) / 2;
        for (auto p : pos) t.offsets.push_back(p - mid);
        t.contour.push_back({-t.half, t.half});
        for (const auto& e : merged) t.contour.push_back({e.top - mid, e.bottom - mid});
        return t;
      };

  const Subtree root = build(kNone, ordered(tree.roots()));
  // Contour level 0 is the virtual root; level 1 holds the real roots.
  double top = std::numeric_limits<double>::infinity(), bottom = -top;
  for (std::size_t l = 1; l < root.contour.size(); ++l) {
    top = std::min(top, root.contour[l].top);
    bottom = std::max(bottom, root.contour[l].bottom);
  }
  const double margin = std::max(options.max_radius, options.min_extent);
  std::function<void(const Subtree&, double)> place = [&](const Subtree& t, double y) {
    if (t.node != kNone) {
      const auto& n = nodes[t.node];
      out.nodes.push_back({n.code, n.label, n.parent, n.depth, margin + (n.depth - 1) * options.level_gap,
                           y - top + options.gap, radius(t.node), size_of[t.node]});
    }
    for (std::size_t i = 0; i < t.children.size(); ++i) place(t.children[i], y + t.offsets[i]);
  };
  place(root, 0.0);
  int max_depth = 1;
  for (const auto& n : out.nodes) max_depth = std::max(max_depth, n.depth);
  out.width = 2 * margin + (max_depth - 1) * options.level_gap;
  out.height = bottom - top + 2 * options.gap;
  return out;
}

}  // namespace archive_lens::layout
