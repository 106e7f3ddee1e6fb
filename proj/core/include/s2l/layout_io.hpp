#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "s2l/layout.hpp"

namespace s2l {

enum class LayoutFormat { Canonical, TextProto };

// Canonical JSON document:
//   {"canvas": {"width", "height"},
//    "elements": [{"name", "kind"?, "label"?, "bbox": {"xmin", "ymin", "width", "height"},
//                  "text_content"?, "image_ref"?, "font_size"?,
//                  "intrinsic_width"?, "intrinsic_height"?}]}
// Missing bbox coordinates read as 0. A missing canvas reads as kDefaultCanvas.
// A missing kind is inferred with infer_kind().
Layout parse_layout_document(std::string_view bytes);
Layout layout_from_json(const nlohmann::json& doc);
nlohmann::json layout_to_json(const Layout& layout);

// Protocol-buffer debug-string form:
//   canvas { width: 1700 height: 2200 }
//   elements { name: "text0" kind: TEXT label: "text" bbox { xmin: 10 ymin: 20 width: 300 height: 40 } }
// Field names are the canonical ones; anything else is a ParseError. When the
// text carries no canvas, `canvas` is used, falling back to kDefaultCanvas.
Layout parse_layout_textproto(std::string_view text, std::optional<Canvas> canvas = std::nullopt);

std::string serialize_layout(const Layout& layout, LayoutFormat format);

// Picks the parser from the content: a leading '{' means canonical JSON.
Layout parse_layout_auto(std::string_view bytes, std::optional<Canvas> canvas = std::nullopt);

}  // namespace s2l
