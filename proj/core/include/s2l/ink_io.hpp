#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "s2l/ink.hpp"

namespace s2l {

// Line-record (JSONL) encodings. Points are [x, y, t] triples; coordinates are
// written with at most six fractional digits.
//
// primitive: {"id", "kind", "strokes", "source_width", "source_height",
//             "source_aspect", "source_font_size"?, "split"}
// sketch:    {"canvas": {"width", "height"}, "strokes", "groups"?}

inline constexpr int kCoordinateDigits = 6;

nlohmann::json strokes_to_json(const std::vector<Stroke>& strokes);
std::vector<Stroke> strokes_from_json(const nlohmann::json& j);

nlohmann::json primitive_to_json(const Primitive& primitive);
Primitive primitive_from_json(const nlohmann::json& j);

nlohmann::json sketch_to_json(const Sketch& sketch);
Sketch sketch_from_json(const nlohmann::json& j);

// One compact JSON line plus '\n'.
std::string primitive_to_line(const Primitive& primitive);
std::string sketch_to_line(const Sketch& sketch);

// Round coordinates the way the file format stores them.
Stroke quantize(const Stroke& stroke);

std::vector<Primitive> read_primitives(std::istream& in);
std::vector<Primitive> load_primitives(const std::filesystem::path& path);
void write_primitives(std::ostream& out, const std::vector<Primitive>& primitives);

Sketch parse_sketch_record(std::string_view line);
Sketch load_sketch(const std::filesystem::path& path);
void save_sketch(const std::filesystem::path& path, const Sketch& sketch);

}  // namespace s2l
