#pragma once

#include <algorithm>
#include <cmath>

namespace archive_lens::layout {

struct Rect {
  double x = 0, y = 0, w = 0, h = 0;

  double area() const { return w * h; }
  bool operator==(const Rect&) const = default;
};

/// max(w/h, h/w); infinite for a degenerate rect.
inline double aspect_ratio(const Rect& r) {
  if (r.w <= 0 || r.h <= 0) return INFINITY;
  return std::max(r.w / r.h, r.h / r.w);
}

inline double intersection_area(const Rect& a, const Rect& b) {
  double w = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  double h = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  return w > 0 && h > 0 ? w * h : 0.0;
}

struct Circle {
  double cx = 0, cy = 0, r = 0;

  bool operator==(const Circle&) const = default;
};

}  // namespace archive_lens::layout
