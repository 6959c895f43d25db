#pragma once

#include <string>

#include "layout/circle_pack.hpp"
#include "layout/tree_layout.hpp"
#include "layout/treemap.hpp"

namespace archive_lens::layout {

// JSON documents; keys sorted, trailing newline.
std::string to_json(const TreemapLayout& layout);
std::string to_json(const CirclePackLayout& layout);
std::string to_json(const TreeLayout& layout);

/// Default palette for access classes; unknown classes map to grey.
std::string color_for(std::string_view color_class);

std::string to_svg(const TreemapLayout& layout);
std::string to_svg(const CirclePackLayout& layout, double size = 800);
std::string to_svg(const TreeLayout& layout);

}  // namespace archive_lens::layout
