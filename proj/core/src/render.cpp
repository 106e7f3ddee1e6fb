#include "s2l/render.hpp"

#include <fmt/format.h>

#include "s2l/detail/number.hpp"

namespace s2l {

using detail::format_number;

std::string RenderStyle::fill_for(const Asset& asset) const {
  if (auto it = label_fills.find(asset.label); it != label_fills.end()) return it->second;
  return asset.kind == Kind::Image ? image_fill : text_fill;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default:
        // XML 1.0 forbids most control characters even when escaped.
        if (static_cast<unsigned char>(c) < 0x20 && c != '\t' && c != '\n' && c != '\r')
          out += "&#xFFFD;";
        else
          out += c;
    }
  }
  return out;
}

std::string render_layout_svg(const Layout& layout, const RenderStyle& style) {
  const std::string w = format_number(layout.canvas.width), h = format_number(layout.canvas.height);
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      w, h);
  for (const auto& a : layout.assets) {
    out += fmt::format(
        "  <rect data-name=\"{}\" data-kind=\"{}\" data-label=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" "
        "fill=\"{}\" fill-opacity=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
        xml_escape(a.name), to_string(a.kind), xml_escape(a.label), format_number(a.bbox.xmin),
        format_number(a.bbox.ymin), format_number(a.bbox.width), format_number(a.bbox.height),
        xml_escape(style.fill_for(a)), format_number(style.fill_opacity), xml_escape(style.stroke),
        format_number(style.stroke_width));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace s2l
