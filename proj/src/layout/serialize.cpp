#include "layout/serialize.hpp"

#include <cstdio>
#include <map>

#include <json.hpp>

#include "oai/raw_record.hpp"

namespace archive_lens::layout {

using nlohmann::json;

namespace {

json rect_json(const Rect& r) { return {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string svg_open(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
}

}  // namespace

std::string to_json(const TreemapLayout& layout) {
  json cells = json::array();
  for (const auto& c : layout.cells) {
    json ref = {{"dataset", c.ref.dataset}};
    if (c.ref.path) ref["path"] = *c.ref.path;
    cells.push_back({{"x", c.rect.x},
                     {"y", c.rect.y},
                     {"w", c.rect.w},
                     {"h", c.rect.h},
                     {"ref", ref},
                     {"weight", c.weight},
                     {"colorClass", c.color_class}});
  }
  json groups = json::array();
  for (const auto& g : layout.groups) {
    json j = rect_json(g.region);
    j["key"] = g.key;
    j["label"] = g.label;
    j["header"] = g.header ? rect_json(*g.header) : json(nullptr);
    j["first"] = g.first;
    j["count"] = g.count;
    j["total"] = g.total;
    groups.push_back(std::move(j));
  }
  return json{{"viewport", rect_json(layout.viewport)}, {"cells", cells}, {"groups", groups}}.dump() + "\n";
}

std::string to_json(const CirclePackLayout& layout) {
  json nodes = json::array();
  for (const auto& n : layout.nodes)
    nodes.push_back({{"code", n.code}, {"cx", n.circle.cx}, {"cy", n.circle.cy}, {"r", n.circle.r}, {"depth", n.depth}});
  return json{{"nodes", nodes}}.dump() + "\n";
}

std::string to_json(const TreeLayout& layout) {
  json nodes = json::array();
  for (const auto& n : layout.nodes)
    nodes.push_back({{"code", n.code},
                     {"cx", n.x},
                     {"cy", n.y},
                     {"r", n.r},
                     {"depth", n.depth},
                     {"parent", n.parent ? json(*n.parent) : json(nullptr)},
                     {"label", n.label},
                     {"size", n.size}});
  return json{{"nodes", nodes}, {"width", layout.width}, {"height", layout.height}}.dump() + "\n";
}

std::string color_for(std::string_view color_class) {
  static const std::map<std::string_view, std::string> palette = {
      {"Open", "#4caf50"}, {"RestrictedGroup", "#ffd600"}, {"Restricted", "#e53935"}, {"Other", "#9e9e9e"}};
  auto it = palette.find(color_class);
  return it == palette.end() ? "#9e9e9e" : it->second;
}

std::string to_svg(const TreemapLayout& layout) {
  const auto& v = layout.viewport;
  std::string out = svg_open(v.x + v.w, v.y + v.h);
  for (const auto& c : layout.cells)
    out += "<rect x=\"" + num(c.rect.x) + "\" y=\"" + num(c.rect.y) + "\" width=\"" + num(c.rect.w) +
           "\" height=\"" + num(c.rect.h) + "\" fill=\"" + color_for(c.color_class) +
           "\" stroke=\"#ffffff\" stroke-width=\"0.2\"><title>" + oai::xml_escape(c.ref.dataset) +
           "</title></rect>\n";
  for (const auto& g : layout.groups) {
    out += "<rect x=\"" + num(g.region.x) + "\" y=\"" + num(g.region.y) + "\" width=\"" + num(g.region.w) +
           "\" height=\"" + num(g.region.h) + "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    if (g.header) {
      out += "<rect x=\"" + num(g.header->x) + "\" y=\"" + num(g.header->y) + "\" width=\"" + num(g.header->w) +
             "\" height=\"" + num(g.header->h) + "\" fill=\"#eeeeee\"/>\n";
      out += "<text x=\"" + num(g.header->x + 2) + "\" y=\"" + num(g.header->y + g.header->h * 0.8) +
             "\" font-size=\"" + num(g.header->h * 0.8) + "\">" + oai::xml_escape(g.label) + "</text>\n";
    }
  }
  return out + "</svg>\n";
}

std::string to_svg(const CirclePackLayout& layout, double size) {
  std::string out = svg_open(size, size);
  const double half = size / 2;
  for (const auto& n : layout.nodes) {
    out += "<circle cx=\"" + num(half + n.circle.cx * half) + "\" cy=\"" + num(half + n.circle.cy * half) +
           "\" r=\"" + num(n.circle.r * half) + "\" fill=\"#1f77b4\" fill-opacity=\"0.15\" stroke=\"#1f77b4\">" +
           "<title>" + oai::xml_escape(n.code) + "</title></circle>\n";
  }
  return out + "</svg>\n";
}

std::string to_svg(const TreeLayout& layout) {
  std::string out = svg_open(layout.width, layout.height);
  std::map<std::string_view, const TreeNodeLayout*> by_code;
  for (const auto& n : layout.nodes) by_code[n.code] = &n;
  for (const auto& n : layout.nodes) {
    if (!n.parent) continue;
    const auto* p = by_code.at(*n.parent);
    out += "<line x1=\"" + num(p->x) + "\" y1=\"" + num(p->y) + "\" x2=\"" + num(n.x) + "\" y2=\"" + num(n.y) +
           "\" stroke=\"#999999\"/>\n";
  }
  for (const auto& n : layout.nodes) {
    out += "<circle cx=\"" + num(n.x) + "\" cy=\"" + num(n.y) + "\" r=\"" + num(n.r) +
           "\" fill=\"#1f77b4\" fill-opacity=\"0.25\"/>\n";
    out += "<text x=\"" + num(n.x + 4) + "\" y=\"" + num(n.y + 4) + "\" font-size=\"10\">" +
           oai::xml_escape(n.code + " " + n.label) + "</text>\n";
  }
  return out + "</svg>\n";
}

}  // namespace archive_lens::layout
