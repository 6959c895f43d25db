#include "layout/circle_pack.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include "common/error.hpp"

namespace archive_lens::layout {

namespace {

// ---- smallest enclosing circle (move-to-front over a basis of <= 3) ---------

struct Encloser {
  double eps;  // absolute slack, derived from the input's extent

  bool encloses_not(const Circle& a, const Circle& b) const {
    const double dr = a.r - b.r, dx = b.cx - a.cx, dy = b.cy - a.cy;
    return dr < 0 || dr * dr < dx * dx + dy * dy;
  }
  bool encloses_weak(const Circle& a, const Circle& b) const {
    const double dr = a.r - b.r + eps, dx = b.cx - a.cx, dy = b.cy - a.cy;
    return dr > 0 && dr * dr > dx * dx + dy * dy;
  }
  bool encloses_weak_all(const Circle& a, const std::vector<Circle>& basis) const {
    return std::all_of(basis.begin(), basis.end(), [&](const Circle& b) { return encloses_weak(a, b); });
  }

  static Circle basis2(const Circle& a, const Circle& b) {
    const double x21 = b.cx - a.cx, y21 = b.cy - a.cy, r21 = b.r - a.r;
    const double l = std::sqrt(x21 * x21 + y21 * y21);
    if (l == 0) return a.r >= b.r ? a : b;
    return {(a.cx + b.cx + x21 / l * r21) / 2, (a.cy + b.cy + y21 / l * r21) / 2, (l + a.r + b.r) / 2};
  }

  static Circle basis3(const Circle& a, const Circle& b, const Circle& c) {
    const double x1 = a.cx, y1 = a.cy, r1 = a.r;
    const double a2 = x1 - b.cx, a3 = x1 - c.cx, b2 = y1 - b.cy, b3 = y1 - c.cy;
    const double c2 = b.r - r1, c3 = c.r - r1;
    const double d1 = x1 * x1 + y1 * y1 - r1 * r1;
    const double d2 = d1 - b.cx * b.cx - b.cy * b.cy + b.r * b.r;
    const double d3 = d1 - c.cx * c.cx - c.cy * c.cy + c.r * c.r;
    const double ab = a3 * b2 - a2 * b3;
    const double xa = (b2 * d3 - b3 * d2) / (ab * 2) - x1, xb = (b3 * c2 - b2 * c3) / ab;
    const double ya = (a3 * d2 - a2 * d3) / (ab * 2) - y1, yb = (a2 * c3 - a3 * c2) / ab;
    const double A = xb * xb + yb * yb - 1, B = 2 * (r1 + xa * xb + ya * yb), C = xa * xa + ya * ya - r1 * r1;
    const double r = -(A != 0 ? (B + std::sqrt(B * B - 4 * A * C)) / (2 * A) : C / B);
    return {x1 + xa + xb * r, y1 + ya + yb * r, r};
  }

  static Circle basis(const std::vector<Circle>& b) {
    switch (b.size()) {
      case 1: return b[0];
      case 2: return basis2(b[0], b[1]);
      default: return basis3(b[0], b[1], b[2]);
    }
  }

  std::vector<Circle> extend(const std::vector<Circle>& B, const Circle& p) const {
    if (encloses_weak_all(p, B)) return {p};
    for (std::size_t i = 0; i < B.size(); ++i)
      if (encloses_not(p, B[i]) && encloses_weak_all(basis2(B[i], p), B)) return {B[i], p};
    for (std::size_t i = 0; i + 1 < B.size(); ++i)
      for (std::size_t j = i + 1; j < B.size(); ++j)
        if (encloses_not(basis2(B[i], B[j]), p) && encloses_not(basis2(B[i], p), B[j]) &&
            encloses_not(basis2(B[j], p), B[i]) && encloses_weak_all(basis3(B[i], B[j], p), B))
          return {B[i], B[j], p};
    // Numerical dead end: take the smallest candidate basis covering B and p.
    std::vector<std::vector<Circle>> candidates;
    for (std::size_t i = 0; i < B.size(); ++i) {
      candidates.push_back({B[i], p});
      for (std::size_t j = i + 1; j < B.size(); ++j) candidates.push_back({B[i], B[j], p});
    }
    std::vector<Circle> all = B;
    all.push_back(p);
    const std::vector<Circle>* best = nullptr;
    double best_r = std::numeric_limits<double>::infinity();
    for (const auto& cand : candidates) {
      const Circle e = basis(cand);
      if (std::isfinite(e.r) && e.r < best_r && encloses_weak_all(e, all)) {
        best = &cand;
        best_r = e.r;
      }
    }
    if (best) return *best;
    return {basis2(B.front(), p)};
  }
};

}  // namespace

Circle enclosing_circle(std::span<const Circle> circles) {
  if (circles.empty()) throw Error(ErrorCode::EmptyInput, "enclosing_circle needs at least one circle");
  double extent = 0;
  for (const auto& c : circles) extent = std::max(extent, std::abs(c.cx) + std::abs(c.cy) + c.r);
  const Encloser enc{extent * 1e-12};

  std::vector<Circle> B;
  std::optional<Circle> e;
  std::size_t i = 0, restarts = 0;
  const std::size_t max_restarts = 64 * circles.size() * circles.size() + 64;
  while (i < circles.size()) {
    const Circle& p = circles[i];
    if (e && enc.encloses_weak(*e, p)) {
      ++i;
    } else {
      B = enc.extend(B, p);
      e = Encloser::basis(B);
      i = 0;
      if (++restarts > max_restarts) break;
    }
  }
  // Guarantee containment whatever rounding did to the basis circle.
  Circle out = *e;
  if (!std::isfinite(out.cx) || !std::isfinite(out.cy) || !std::isfinite(out.r)) out = circles.front();
  for (const auto& c : circles) out.r = std::max(out.r, std::hypot(c.cx - out.cx, c.cy - out.cy) + c.r);
  return out;
}

namespace {

void place(const Circle& b, const Circle& a, Circle& c) {
  const double dx = b.cx - a.cx, dy = b.cy - a.cy, d2 = dx * dx + dy * dy;
  if (d2 > 0) {
    double a2 = a.r + c.r, b2 = b.r + c.r;
    a2 *= a2;
    b2 *= b2;
    if (a2 > b2) {
      const double x = (d2 + b2 - a2) / (2 * d2), y = std::sqrt(std::max(0.0, b2 / d2 - x * x));
      c.cx = b.cx - x * dx - y * dy;
      c.cy = b.cy - x * dy + y * dx;
    } else {
      const double x = (d2 + a2 - b2) / (2 * d2), y = std::sqrt(std::max(0.0, a2 / d2 - x * x));
      c.cx = a.cx + x * dx - y * dy;
      c.cy = a.cy + x * dy + y * dx;
    }
  } else {
    c.cx = a.cx + c.r;
    c.cy = a.cy;
  }
}

bool intersects(const Circle& a, const Circle& b) {
  const double dr = (a.r + b.r) * (1 - 1e-10), dx = b.cx - a.cx, dy = b.cy - a.cy;
  return dr > 0 && dr * dr > dx * dx + dy * dy;
}

struct ChainNode {
  std::size_t idx;
  ChainNode* next = nullptr;
  ChainNode* previous = nullptr;
};

}  // namespace

Circle pack_siblings(std::vector<Circle>& circles) {
  const std::size_t n = circles.size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "pack_siblings needs at least one circle");
  auto& c0 = circles[0];
  c0.cx = 0;
  c0.cy = 0;
  if (n == 1) return {0, 0, c0.r};
  auto& c1 = circles[1];
  c0.cx = -c1.r;
  c1.cx = c0.r;
  c1.cy = 0;
  if (n > 2) {
    place(circles[1], circles[0], circles[2]);
    std::vector<std::unique_ptr<ChainNode>> store;
    auto make = [&](std::size_t idx) {
      store.push_back(std::make_unique<ChainNode>(ChainNode{idx}));
      return store.back().get();
    };
    ChainNode* a = make(0);
    ChainNode* b = make(1);
    ChainNode* c = make(2);
    a->next = c->previous = b;
    b->next = a->previous = c;
    c->next = b->previous = a;

    auto score = [&](const ChainNode* node) {
      const Circle& p = circles[node->idx];
      const Circle& q = circles[node->next->idx];
      const double ab = p.r + q.r;
      const double dx = (p.cx * q.r + q.cx * p.r) / ab, dy = (p.cy * q.r + q.cy * p.r) / ab;
      return dx * dx + dy * dy;
    };

    for (std::size_t i = 3; i < n; ++i) {
      place(circles[a->idx], circles[b->idx], circles[i]);
      const Circle& ci = circles[i];
      ChainNode* j = b->next;
      ChainNode* k = a->previous;
      double sj = circles[b->idx].r, sk = circles[a->idx].r;
      bool retry = false;
      do {
        if (sj <= sk) {
          if (intersects(circles[j->idx], ci)) {
            b = j;
            a->next = b;
            b->previous = a;
            retry = true;
            break;
          }
          sj += circles[j->idx].r;
          j = j->next;
        } else {
          if (intersects(circles[k->idx], ci)) {
            a = k;
            a->next = b;
            b->previous = a;
            retry = true;
            break;
          }
          sk += circles[k->idx].r;
          k = k->previous;
        }
      } while (j != k->next);
      if (retry) {
        --i;
        continue;
      }
      ChainNode* node = make(i);
      node->previous = a;
      node->next = b;
      b->previous = node;
      a->next = node;
      b = node;
      double aa = score(a);
      for (ChainNode* p = node->next; p != b; p = p->next) {
        const double ca = score(p);
        if (ca < aa) {
          a = p;
          aa = ca;
        }
      }
      b = a->next;
    }
  }
  const Circle e = enclosing_circle(circles);
  for (auto& c : circles) {
    c.cx -= e.cx;
    c.cy -= e.cy;
  }
  return {0, 0, e.r};
}

namespace {

struct PackItem {
  std::string code;  // empty for a reserved slot
  double size = 0;
  double r = 0;
  double dx = 0, dy = 0;  // offset from the parent's center
  int depth = 0;
  std::vector<PackItem> children;
};

void pack_item(PackItem& item, double padding) {
  if (item.children.empty()) return;
  for (auto& c : item.children) pack_item(c, padding);
  std::vector<Circle> circles;
  for (const auto& c : item.children) circles.push_back({0, 0, c.r});
  const Circle e = pack_siblings(circles);
  for (std::size_t i = 0; i < circles.size(); ++i) {
    item.children[i].dx = circles[i].cx;
    item.children[i].dy = circles[i].cy;
  }
  item.r = e.r / (1 - padding);
}

void emit(const PackItem& item, double cx, double cy, double scale, std::vector<PackedNode>& out) {
  if (item.code.empty() && item.depth > 0) return;  // reserved slot
  out.push_back({item.code, {cx * scale, cy * scale, item.r * scale}, item.depth});
  for (const auto& c : item.children) emit(c, cx + c.dx, cy + c.dy, scale, out);
}

}  // namespace

CirclePackLayout circle_pack(const analytics::CategoryTree& tree, const analytics::RollupTable& sizes,
                             analytics::RollupMode mode, const CirclePackOptions& options) {
  if (!(options.padding >= 0 && options.padding < 1))
    throw Error(ErrorCode::InvalidArgument, "padding must lie in [0, 1)");
  double max_size = 0;
  for (const auto& node : tree.nodes())
    if (const auto* e = sizes.find(node.code)) max_size = std::max(max_size, static_cast<double>(e->size(mode)));
  if (tree.empty() || max_size <= 0) throw Error(ErrorCode::EmptyTree, "no category has a non-zero count");

  auto by_size = [](const PackItem& a, const PackItem& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.code < b.code;
  };
  std::function<PackItem(const std::string&)> build = [&](const std::string& code) {
    const auto& node = tree.at(code);
    const auto& entry = sizes.at(code);
    PackItem item{code, static_cast<double>(entry.size(mode)), 0, 0, 0, node.depth, {}};
    for (const auto& child : node.children) {
      const auto* ce = sizes.find(child);
      if (ce && ce->size(mode) > 0) item.children.push_back(build(child));
    }
    if (item.children.empty()) {
      item.r = std::sqrt(item.size / max_size);
    } else if (entry.direct > 0) {
      const double self = static_cast<double>(entry.direct);
      item.children.push_back({"", self, std::sqrt(self / max_size), 0, 0, node.depth + 1, {}});
    }
    std::stable_sort(item.children.begin(), item.children.end(), by_size);
    return item;
  };

  std::vector<PackItem> roots;
  for (const auto& code : tree.roots())
    if (sizes.at(code).size(mode) > 0) roots.push_back(build(code));
  std::stable_sort(roots.begin(), roots.end(), by_size);

  PackItem top;
  if (roots.size() == 1) {
    top = std::move(roots.front());
  } else {
    top.depth = 0;
    for (const auto& r : roots) top.size += r.size;
    top.children = std::move(roots);
  }
  pack_item(top, options.padding);

  CirclePackLayout layout;
  emit(top, 0, 0, 1.0 / top.r, layout.nodes);
  layout.nodes.front().circle = {0, 0, 1};
  return layout;
}

}  // namespace archive_lens::layout
