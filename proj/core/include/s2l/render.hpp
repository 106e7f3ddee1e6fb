#pragma once

#include <map>
#include <string>

#include "s2l/layout.hpp"

namespace s2l {

struct RenderStyle {
  std::string text_fill = "#4c72b0";
  std::string image_fill = "#dd8452";
  // Overrides keyed by asset label; consulted before the kind colors.
  std::map<std::string, std::string> label_fills = {{"background", "#dddddd"}, {"title", "#55a868"}};
  double fill_opacity = 0.5;
  std::string stroke = "#222222";
  double stroke_width = 2.0;

  std::string fill_for(const Asset& asset) const;
};

// SVG 1.1 document with one <rect> per asset, in list order. Each rect carries
// data-name, data-kind and data-label attributes.
std::string render_layout_svg(const Layout& layout, const RenderStyle& style = {});

std::string xml_escape(std::string_view s);

}  // namespace s2l
