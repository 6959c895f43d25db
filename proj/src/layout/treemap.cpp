#include "layout/treemap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.hpp"

namespace archive_lens::layout {

namespace {

void check_viewport(const Rect& v) {
  if (!(std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.w) && std::isfinite(v.h)) || v.w <= 0 ||
      v.h <= 0)
    throw Error(ErrorCode::InvalidArgument, "viewport must have finite coordinates and positive area");
}

// Worst aspect ratio of a row of areas laid along a side of length `side`.
double worst(double sum, double amin, double amax, double side) {
  const double s2 = sum * sum, side2 = side * side;
  return std::max(side2 * amax / s2, s2 / (side2 * amin));
}

}  // namespace

std::vector<Rect> squarify(std::span<const double> weights, const Rect& viewport) {
  if (weights.empty()) throw Error(ErrorCode::EmptyInput, "squarify needs at least one weight");
  check_viewport(viewport);
  double wmax = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!(w > 0) || !std::isfinite(w))
      throw Error(ErrorCode::NonPositiveWeight, "weight " + std::to_string(i) + " is not a positive finite number",
                  std::to_string(i));
    wmax = std::max(wmax, w);
  }
  const std::size_t n = weights.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });

  std::vector<double> area(n);
  double total = 0;
  for (auto i : order) total += weights[i] / wmax;
  const double scale = viewport.w * viewport.h / total;
  for (std::size_t i = 0; i < n; ++i) area[i] = weights[i] / wmax * scale;

  std::vector<Rect> out(n);
  Rect rem = viewport;
  std::size_t i = 0;
  while (i < n) {
    const bool vertical = rem.w >= rem.h;  // strip along the left edge, else along the top
    const double side = vertical ? rem.h : rem.w;
    double sum = area[order[i]], amin = sum, amax = sum;
    double current = worst(sum, amin, amax, side);
    std::size_t j = i + 1;
    for (; j < n; ++j) {
      const double a = area[order[j]];
      const double next = worst(sum + a, std::min(amin, a), std::max(amax, a), side);
      if (next > current) break;
      sum += a;
      amin = std::min(amin, a);
      amax = std::max(amax, a);
      current = next;
    }
    const bool last_row = j == n;
    const double thickness = last_row ? (vertical ? rem.w : rem.h) : sum / side;
    double offset = 0;
    for (std::size_t k = i; k < j; ++k) {
      const std::size_t idx = order[k];
      const double len = k + 1 == j ? side - offset : area[idx] / thickness;
      out[idx] = vertical ? Rect{rem.x, rem.y + offset, thickness, len} : Rect{rem.x + offset, rem.y, len, thickness};
      offset += len;
    }
    if (vertical) {
      rem.x += thickness;
      rem.w -= thickness;
    } else {
      rem.y += thickness;
      rem.h -= thickness;
    }
    if (rem.w < 0) rem.w = 0;
    if (rem.h < 0) rem.h = 0;
    i = j;
  }
  return out;
}

TreemapLayout flat_treemap(std::vector<TreemapItem> items, const Rect& viewport) {
  std::vector<double> weights;
  weights.reserve(items.size());
  for (const auto& it : items) weights.push_back(it.weight);
  auto rects = squarify(weights, viewport);
  TreemapLayout layout{viewport, {}, {}};
  layout.cells.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i)
    layout.cells.push_back({rects[i], std::move(items[i].ref), items[i].weight, std::move(items[i].color_class)});
  return layout;
}

TreemapLayout grouped_treemap(std::vector<TreemapGroupInput> groups, const Rect& viewport,
                              const TreemapOptions& options) {
  if (groups.empty()) throw Error(ErrorCode::EmptyInput, "grouped treemap needs at least one group");
  check_viewport(viewport);
  std::vector<double> totals;
  for (const auto& g : groups) {
    if (g.items.empty()) throw Error(ErrorCode::EmptyInput, "group " + g.key + " has no items", g.key);
    double t = 0;
    for (const auto& it : g.items) t += it.weight;
    totals.push_back(t);
  }
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (totals[a] != totals[b]) return totals[a] > totals[b];
    return groups[a].key < groups[b].key;
  });
  std::vector<double> sorted_totals;
  for (auto g : order) sorted_totals.push_back(totals[g]);
  const auto regions = squarify(sorted_totals, viewport);

  TreemapLayout layout{viewport, {}, {}};
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& g = groups[order[k]];
    TreemapGroup box{g.key, g.label, regions[k], std::nullopt, layout.cells.size(), g.items.size(), totals[order[k]]};
    Rect body = regions[k];
    const double header_h = body.h * options.header_fraction;
    if (options.header_fraction > 0 && header_h >= options.min_header_fraction_of_viewport * viewport.h &&
        header_h < body.h) {
      box.header = Rect{body.x, body.y, body.w, header_h};
      body.y += header_h;
      body.h -= header_h;
    }
    auto inner = flat_treemap(std::move(g.items), body);
    for (auto& c : inner.cells) layout.cells.push_back(std::move(c));
    layout.groups.push_back(std::move(box));
  }
  return layout;
}

}  // namespace archive_lens::layout
