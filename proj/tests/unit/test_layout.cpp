#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "analytics/analytics.hpp"
#include "catalogue/corpus_generator.hpp"
#include "common/error.hpp"
#include "corpora.hpp"
#include "layout/serialize.hpp"
#include "layout/views.hpp"
#include "oracles.hpp"

using namespace archive_lens;
using namespace archive_lens::layout;
using analytics::RollupMode;

namespace {

double sum(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s;
}

void check_tiling(const std::vector<Rect>& rects, const std::vector<double>& weights, const Rect& vp) {
  REQUIRE(rects.size() == weights.size());
  const double total = sum(weights);
  double area = 0;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    area += rects[i].area();
    CHECK(rects[i].area() / vp.area() == doctest::Approx(weights[i] / total).epsilon(1e-9));
    CHECK(rects[i].x >= vp.x - 1e-9 * vp.w);
    CHECK(rects[i].y >= vp.y - 1e-9 * vp.h);
    CHECK(rects[i].x + rects[i].w <= vp.x + vp.w + 1e-9 * vp.w);
    CHECK(rects[i].y + rects[i].h <= vp.y + vp.h + 1e-9 * vp.h);
    for (std::size_t j = i + 1; j < rects.size(); ++j) CHECK(intersection_area(rects[i], rects[j]) <= 1e-9 * vp.area());
  }
  CHECK(area == doctest::Approx(vp.area()).epsilon(1e-9));
}

analytics::CategoryTree tree_of(std::vector<catalogue::TreeRow> rows) { return analytics::CategoryTree::from_rows(rows); }

// Direct counts on the given codes, rolled up through the tree.
analytics::RollupTable sized(const analytics::CategoryTree& tree, std::map<std::string, int> direct) {
  std::vector<analytics::DatasetRecord> records;
  int id = 0;
  for (const auto& [code, n] : direct)
    for (int k = 0; k < n; ++k) {
      analytics::DatasetRecord r;
      r.easy_id = "r" + std::to_string(id++);
      r.categories = {tree.path_to(code)};
      records.push_back(r);
    }
  return analytics::rollup_counts(tree, records);
}

// Parent index of each pre-order node.
std::vector<int> parents_of(const CirclePackLayout& layout) {
  std::vector<int> parent(layout.nodes.size(), -1);
  std::vector<int> stack;
  for (std::size_t i = 0; i < layout.nodes.size(); ++i) {
    while (!stack.empty() && layout.nodes[static_cast<std::size_t>(stack.back())].depth >= layout.nodes[i].depth)
      stack.pop_back();
    if (!stack.empty()) parent[i] = stack.back();
    stack.push_back(static_cast<int>(i));
  }
  return parent;
}

void check_pack(const CirclePackLayout& layout, const analytics::RollupTable& sizes, RollupMode mode) {
  REQUIRE_FALSE(layout.nodes.empty());
  const auto& root = layout.nodes[0].circle;
  CHECK(root.r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(root.cx) < 1e-12);
  CHECK(std::abs(root.cy) < 1e-12);
  auto parent = parents_of(layout);
  std::vector<bool> has_child(layout.nodes.size(), false);
  for (std::size_t i = 0; i < layout.nodes.size(); ++i) {
    const auto& c = layout.nodes[i].circle;
    CHECK(c.r > 0);
    if (parent[i] < 0) continue;
    has_child[static_cast<std::size_t>(parent[i])] = true;
    const auto& p = layout.nodes[static_cast<std::size_t>(parent[i])].circle;
    CHECK(std::hypot(c.cx - p.cx, c.cy - p.cy) + c.r <= p.r + 1e-9);
    for (std::size_t j = i + 1; j < layout.nodes.size(); ++j) {
      if (parent[j] != parent[i]) continue;
      const auto& d = layout.nodes[j].circle;
      CHECK(std::hypot(c.cx - d.cx, c.cy - d.cy) >= c.r + d.r - 1e-9);
    }
  }
  // Leaf areas are proportional to sizes.
  double ratio = -1;
  for (std::size_t i = 0; i < layout.nodes.size(); ++i) {
    if (has_child[i] || layout.nodes[i].code.empty()) continue;
    const double size = static_cast<double>(sizes.at(layout.nodes[i].code).size(mode));
    const double r = layout.nodes[i].circle.r;
    if (ratio < 0) ratio = r * r / size;
    else CHECK(r * r / size == doctest::Approx(ratio).epsilon(1e-7));
  }
}

}  // namespace

TEST_CASE("squarify small cases") {
  const Rect unit{0, 0, 1, 1};
  SUBCASE("single weight") {
    auto r = squarify(std::vector<double>{3.5}, unit);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == unit);
  }
  SUBCASE("two equal") {
    std::vector<double> w{1, 1};
    auto r = squarify(w, unit);
    check_tiling(r, w, unit);
    CHECK(r[0].area() == 0.5);
    CHECK(r[1].area() == 0.5);
  }
  SUBCASE("classic example") {
    std::vector<double> w{6, 6, 4, 3, 2, 2, 1};
    const Rect vp{0, 0, 6, 4};
    auto r = squarify(w, vp);
    check_tiling(r, w, vp);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(r[i].area() == doctest::Approx(w[i]).epsilon(1e-12));
    CHECK(oracle::max_aspect(r) <= oracle::max_aspect(oracle::slice_and_dice(w, vp)));
  }
  SUBCASE("errors") {
    auto code = [](std::vector<double> w, Rect vp) {
      try {
        squarify(w, vp);
      } catch (const Error& e) {
        return e.code();
      }
      return ErrorCode::IoError;
    };
    CHECK(code({}, unit) == ErrorCode::EmptyInput);
    CHECK(code({1, 0}, unit) == ErrorCode::NonPositiveWeight);
    CHECK(code({1, -2}, unit) == ErrorCode::NonPositiveWeight);
    CHECK(code({1, NAN}, unit) == ErrorCode::NonPositiveWeight);
    CHECK(code({1}, Rect{0, 0, 0, 1}) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("squarify properties over random weights") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> wd(0.01, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    std::vector<double> w(n);
    for (auto& x : w) x = trial % 3 == 0 ? static_cast<double>(1 + rng() % 9) : wd(rng);
    const Rect vp{0.5, -2, 1 + wd(rng), 1 + wd(rng)};
    auto r = squarify(w, vp);
    check_tiling(r, w, vp);
    CHECK(oracle::max_aspect(r) <= oracle::max_aspect(oracle::slice_and_dice(w, vp)) * (1 + 1e-12));
    for (double k : {2.0, 0.25, 1024.0}) {
      std::vector<double> scaled = w;
      for (auto& x : scaled) x *= k;
      CHECK(squarify(scaled, vp) == r);
    }
    CHECK(squarify(w, vp) == r);
  }
}

TEST_CASE("grouped treemap") {
  const Rect vp{0, 0, 1000, 600};
  auto items = [](std::initializer_list<double> ws) {
    std::vector<TreemapItem> out;
    int i = 0;
    for (double w : ws) out.push_back({w, {"d" + std::to_string(i++), std::nullopt}, "Open"});
    return out;
  };
  SUBCASE("one group equals flat squarify below the header") {
    auto g = grouped_treemap({{"k", "K", items({5, 3, 2})}}, vp);
    REQUIRE(g.groups.size() == 1);
    REQUIRE(g.groups[0].header);
    const Rect body{0, g.groups[0].header->h, 1000, 600 - g.groups[0].header->h};
    CHECK(g.groups[0].header->h == doctest::Approx(600 * 0.06));
    auto flat = squarify(std::vector<double>{5, 3, 2}, body);
    REQUIRE(g.cells.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(g.cells[i].rect == flat[i]);
  }
  SUBCASE("two groups 3 to 1") {
    auto g = grouped_treemap({{"small", "S", items({1})}, {"big", "B", items({1, 2})}}, vp);
    REQUIRE(g.groups.size() == 2);
    CHECK(g.groups[0].key == "big");
    CHECK(g.groups[0].region.area() / g.groups[1].region.area() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(g.groups[0].first == 0);
    CHECK(g.groups[0].count == 2);
    CHECK(g.groups[1].first == 2);
    CHECK(g.groups[0].total == 3);
  }
  SUBCASE("header dropped when too thin") {
    TreemapOptions o;
    o.min_header_fraction_of_viewport = 0.5;
    auto g = grouped_treemap({{"k", "K", items({1})}}, vp, o);
    CHECK_FALSE(g.groups[0].header.has_value());
    CHECK(g.cells[0].rect == vp);
  }
  SUBCASE("empty inputs") {
    CHECK_THROWS_AS(grouped_treemap({}, vp), Error);
    CHECK_THROWS_AS(grouped_treemap({{"k", "K", {}}}, vp), Error);
  }
}

TEST_CASE("enclosing circle") {
  SUBCASE("one circle") {
    std::vector<Circle> cs{{2, 3, 1.5}};
    CHECK(enclosing_circle(cs) == cs[0]);
  }
  SUBCASE("two disjoint equal circles") {
    std::vector<Circle> cs{{0, 0, 1}, {10, 0, 1}};
    auto e = enclosing_circle(cs);
    CHECK(e.cx == doctest::Approx(5));
    CHECK(e.cy == doctest::Approx(0));
    CHECK(e.r == doctest::Approx(6));
  }
  SUBCASE("nested") {
    std::vector<Circle> cs{{0, 0, 5}, {1, 1, 1}};
    auto e = enclosing_circle(cs);
    CHECK(e.r == doctest::Approx(5));
  }
  SUBCASE("empty") { CHECK_THROWS_AS(enclosing_circle(std::vector<Circle>{}), Error); }
  SUBCASE("random against the oracle") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pos(-10, 10), rad(0.01, 3);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = trial < 5 ? 50 : 1 + rng() % 12;
      std::vector<Circle> cs(n);
      for (auto& c : cs) c = {pos(rng), pos(rng), rad(rng)};
      auto e = enclosing_circle(cs);
      CHECK(oracle::contains_all(e, cs, 1e-9));
      auto o = oracle::enclosing_circle(cs);
      CHECK(e.r == doctest::Approx(o.r).epsilon(1e-7));
    }
  }
}

TEST_CASE("pack siblings") {
  std::vector<Circle> three{{0, 0, 1}, {0, 0, 1}, {0, 0, 1}};
  auto e = pack_siblings(three);
  CHECK(e.r == doctest::Approx(1 + 2 / std::sqrt(3.0)).epsilon(1e-12));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      CHECK(std::hypot(three[i].cx - three[j].cx, three[i].cy - three[j].cy) == doctest::Approx(2.0).epsilon(1e-12));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> rad(0.05, 4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Circle> cs(1 + rng() % 30);
    for (auto& c : cs) c.r = rad(rng);
    auto enc = pack_siblings(cs);
    CHECK(oracle::contains_all(enc, cs, 1e-9 * enc.r));
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t j = i + 1; j < cs.size(); ++j)
        CHECK(std::hypot(cs[i].cx - cs[j].cx, cs[i].cy - cs[j].cy) >= cs[i].r + cs[j].r - 1e-9 * enc.r);
  }
}

TEST_CASE("circle pack") {
  SUBCASE("single node is the unit circle") {
    auto t = tree_of({{"A1", "", "a"}});
    auto s = sized(t, {{"A1", 4}});
    auto l = circle_pack(t, s, RollupMode::Unique);
    REQUIRE(l.nodes.size() == 1);
    CHECK(l.nodes[0].circle == Circle{0, 0, 1});
    CHECK(l.nodes[0].code == "A1");
  }
  SUBCASE("one child is concentric at 1 - padding") {
    auto t = tree_of({{"A1", "", "a"}, {"B1", "A1", "b"}});
    auto s = sized(t, {{"B1", 3}});
    for (double p : {0.0, 0.03, 0.2}) {
      auto l = circle_pack(t, s, RollupMode::Unique, {p});
      REQUIRE(l.nodes.size() == 2);
      CHECK(l.nodes[1].circle.r == doctest::Approx(1 - p).epsilon(1e-12));
      CHECK(std::abs(l.nodes[1].circle.cx) < 1e-12);
      CHECK(std::abs(l.nodes[1].circle.cy) < 1e-12);
    }
  }
  SUBCASE("three equal children") {
    auto t = tree_of({{"A1", "", "a"}, {"B1", "A1", "b"}, {"C1", "A1", "c"}, {"D1", "A1", "d"}});
    auto s = sized(t, {{"B1", 2}, {"C1", 2}, {"D1", 2}});
    auto l = circle_pack(t, s, RollupMode::Unique, {0.0});
    REQUIRE(l.nodes.size() == 4);
    CHECK(1.0 / l.nodes[1].circle.r == doctest::Approx(1 + 2 / std::sqrt(3.0)).epsilon(1e-9));
  }
  SUBCASE("zero nodes omitted and several roots") {
    auto t = tree_of({{"A1", "", "a"}, {"B1", "A1", "b"}, {"E1", "", "e"}, {"F1", "", "f"}});
    auto s = sized(t, {{"B1", 2}, {"E1", 5}});
    auto l = circle_pack(t, s, RollupMode::Unique);
    CHECK(l.nodes.size() == 4);
    CHECK(l.nodes[0].code.empty());
    CHECK(l.nodes[0].depth == 0);
    for (const auto& n : l.nodes) CHECK(n.code != "F1");
    check_pack(l, s, RollupMode::Unique);
  }
  SUBCASE("errors") {
    auto t = tree_of({{"A1", "", "a"}});
    auto s = sized(t, {});
    CHECK_THROWS_AS(circle_pack(t, s, RollupMode::Unique), Error);
    auto s2 = sized(t, {{"A1", 1}});
    CHECK_THROWS_AS(circle_pack(t, s2, RollupMode::Unique, {1.0}), Error);
    CHECK_THROWS_AS(circle_pack(t, s2, RollupMode::Unique, {-0.1}), Error);
  }
  SUBCASE("random trees") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 40; ++trial) {
      auto snap = corpora::random_snapshot(rng, 30, 1 + static_cast<int>(rng() % 200));
      auto sizes = analytics::rollup_counts(*snap);
      for (auto mode : {RollupMode::Unique, RollupMode::Assignment}) {
        auto l = circle_pack(snap->tree(), sizes, mode);
        check_pack(l, sizes, mode);
        CHECK(circle_pack(snap->tree(), sizes, mode) == l);
      }
    }
  }
}

TEST_CASE("tidy tree") {
  SUBCASE("chain") {
    auto t = tree_of({{"A1", "", "a"}, {"B1", "A1", "b"}, {"C1", "B1", "c"}});
    auto l = tidy_tree_layout(t, sized(t, {{"C1", 1}}));
    REQUIRE(l.nodes.size() == 3);
    CHECK(l.nodes[0].x < l.nodes[1].x);
    CHECK(l.nodes[1].x < l.nodes[2].x);
    CHECK(l.nodes[0].y == l.nodes[1].y);
    CHECK(l.nodes[1].y == l.nodes[2].y);
    CHECK(l.nodes[2].parent == std::optional<std::string>("B1"));
  }
  SUBCASE("equal siblings are symmetric") {
    auto t = tree_of({{"A1", "", "a"}, {"B1", "A1", "b"}, {"C1", "A1", "c"}});
    auto l = tidy_tree_layout(t, sized(t, {{"B1", 3}, {"C1", 3}}));
    REQUIRE(l.nodes.size() == 3);
    CHECK(l.nodes[1].y - l.nodes[0].y == doctest::Approx(l.nodes[0].y - l.nodes[2].y));
    CHECK(l.nodes[1].r == l.nodes[2].r);
  }
  SUBCASE("radius is monotone and capped") {
    auto t = tree_of({{"A1", "", "a"}, {"B1", "A1", "b"}, {"C1", "A1", "c"}, {"D1", "A1", "d"}});
    TreeLayoutOptions o;
    auto l = tidy_tree_layout(t, sized(t, {{"B1", 9}, {"C1", 4}, {"D1", 1}}), o);
    CHECK(l.nodes[0].r == doctest::Approx(o.max_radius));
    CHECK(l.nodes[1].code == "B1");
    CHECK(l.nodes[1].r > l.nodes[2].r);
    CHECK(l.nodes[2].r > l.nodes[3].r);
    CHECK(l.nodes[1].r / l.nodes[3].r == doctest::Approx(std::sqrt(9.0 / 1.0)));
  }
  SUBCASE("no same-depth overlap on the synthetic 47-node tree") {
    catalogue::CorpusSpec::TreeShape shape{6, 7, 2, {}};
    auto tree = catalogue::generate_tree(shape);
    CHECK(tree.size() == 132);
    // 5 roots x 3 children x 2 grandchildren is 50 nodes; drop the last child subtree.
    auto small = catalogue::generate_tree({5, 3, 2, {}});
    std::vector<catalogue::TreeRow> rows = small.rows();
    rows.erase(rows.end() - 3, rows.end());
    auto t47 = tree_of(rows);
    REQUIRE(t47.size() == 47);
    std::mt19937_64 rng(47);
    auto records = corpora::random_records(rng, t47, 300);
    auto sizes = analytics::rollup_counts(t47, records);
    auto l = tidy_tree_layout(t47, sizes);
    REQUIRE(l.nodes.size() == 47);
    for (std::size_t i = 0; i < l.nodes.size(); ++i)
      for (std::size_t j = i + 1; j < l.nodes.size(); ++j) {
        if (l.nodes[i].depth != l.nodes[j].depth) continue;
        CHECK(std::abs(l.nodes[i].y - l.nodes[j].y) >= l.nodes[i].r + l.nodes[j].r);
      }
    CHECK(tidy_tree_layout(t47, sizes) == l);
  }
}

TEST_CASE("snapshot views") {
  catalogue::CorpusSpec spec;
  spec.n_unique = 400;
  spec.tree = {4, 3, 2, {}};
  spec.n_categories_used = 20;
  spec.multi_assignment_histogram = {{1, 300}, {2, 80}, {3, 20}};
  spec.rights_mix = {{catalogue::AccessClass::Open, 0.7}, {catalogue::AccessClass::Other, 0.3}};
  spec.depositor_powerlaw = {40, "Veteran Institute", 60, 1.0, 0.05};
  auto corpus = catalogue::generate_corpus(spec);
  auto snap = catalogue::build_snapshot(corpus.raws, corpus.tree).snapshot;
  const std::size_t expansion = 300 + 160 + 60;

  SUBCASE("category treemap has one cell per assignment") {
    TreemapQuery q;
    auto l = snapshot_treemap(*snap, q);
    CHECK(l.cells.size() == expansion);
    double area = 0;
    for (const auto& c : l.cells) {
      area += c.rect.area();
      REQUIRE(c.ref.path);
      const auto* r = snap->find(c.ref.dataset);
      REQUIRE(r != nullptr);
      CHECK(c.color_class == catalogue::to_string(r->access));
    }
    CHECK(area == doctest::Approx(q.viewport.area() - [&] {
      double h = 0;
      for (const auto& g : l.groups)
        if (g.header) h += g.header->area();
      return h;
    }()).epsilon(1e-9));
    CHECK(snapshot_treemap(*snap, q) == l);
  }
  SUBCASE("depositor grouping") {
    TreemapQuery q;
    q.group = GroupKey::Depositor;
    auto l = snapshot_treemap(*snap, q);
    std::size_t creators = 0;
    for (const auto& r : snap->records()) creators += r.creators.size();
    CHECK(l.cells.size() == creators);
    CHECK(l.groups.front().key == "Veteran Institute");
    // Unique mode files each record once, under its first creator.
    q.mode = RollupMode::Unique;
    CHECK(snapshot_treemap(*snap, q).cells.size() == 400);
  }
  SUBCASE("exclude removes the subtree") {
    TreemapQuery q;
    q.exclude = "D10000";
    auto l = snapshot_treemap(*snap, q);
    auto rollups = analytics::rollup_counts(*snap);
    CHECK(l.cells.size() == expansion - rollups.at("D10000").assignment);
    for (const auto& c : l.cells) CHECK(c.ref.path->rfind("D1", 0) != 0);
    q.exclude = "Q1";
    CHECK_THROWS_AS(snapshot_treemap(*snap, q), Error);
  }
  SUBCASE("serialization fields") {
    auto l = snapshot_treemap(*snap, TreemapQuery{});
    auto j = nlohmann::json::parse(to_json(l));
    CHECK(j.contains("viewport"));
    const auto& cell = j["cells"][0];
    for (const char* k : {"x", "y", "w", "h", "ref", "weight", "colorClass"}) CHECK(cell.contains(k));
    auto cp = nlohmann::json::parse(to_json(snapshot_circle_pack(*snap, RollupMode::Unique)));
    for (const char* k : {"code", "cx", "cy", "r", "depth"}) CHECK(cp["nodes"][0].contains(k));
    CHECK(to_svg(l).rfind("<svg", 0) == 0);
    CHECK(color_for("Open") != color_for("Restricted"));
    CHECK(color_for("mystery") == color_for("Other"));
  }
}
