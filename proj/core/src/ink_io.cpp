#include "s2l/ink_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "s2l/detail/number.hpp"
#include "s2l/error.hpp"
#include "s2l/fsutil.hpp"

namespace s2l {

using nlohmann::json;

namespace {

json coord(double v) {
  const double r = detail::round_to_digits(v, kCoordinateDigits);
  if (r == std::floor(r) && std::fabs(r) < 9007199254740992.0) return json(static_cast<std::int64_t>(r));
  return json(r);
}

double num(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(fmt::format("{} must be a number", what));
  return j.get<double>();
}

}  // namespace

Stroke quantize(const Stroke& stroke) {
  Stroke out = stroke;
  for (auto& p : out.points) {
    p.x = detail::round_to_digits(p.x, kCoordinateDigits);
    p.y = detail::round_to_digits(p.y, kCoordinateDigits);
    p.t = detail::round_to_digits(p.t, kCoordinateDigits);
  }
  return out;
}

json strokes_to_json(const std::vector<Stroke>& strokes) {
  json arr = json::array();
  for (const auto& s : strokes) {
    json pts = json::array();
    for (const auto& p : s.points) pts.push_back(json::array({coord(p.x), coord(p.y), coord(p.t)}));
    arr.push_back(std::move(pts));
  }
  return arr;
}

std::vector<Stroke> strokes_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("strokes must be an array");
  std::vector<Stroke> out;
  out.reserve(j.size());
  for (const auto& s : j) {
    if (!s.is_array()) throw ParseError("stroke must be an array of points");
    std::vector<InkPoint> pts;
    pts.reserve(s.size());
    for (const auto& p : s) {
      if (!p.is_array() || p.size() != 3) throw ParseError("point must be [x, y, t]");
      pts.push_back({num(p[0], "x"), num(p[1], "y"), num(p[2], "t")});
    }
    Stroke stroke = Stroke::from_points(std::move(pts));
    validate(stroke);
    out.push_back(std::move(stroke));
  }
  return out;
}

json primitive_to_json(const Primitive& p) {
  json j = json::object();
  j["id"] = p.id;
  j["kind"] = to_string(p.kind);
  j["strokes"] = strokes_to_json(p.strokes);
  j["source_width"] = coord(p.source_width);
  j["source_height"] = coord(p.source_height);
  j["source_aspect"] = coord(p.source_aspect);
  if (p.source_font_size) j["source_font_size"] = coord(*p.source_font_size);
  j["split"] = to_string(p.split);
  return j;
}

Primitive primitive_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("primitive record must be an object");
  Primitive p;
  try {
    p.id = j.at("id").get<std::string>();
    auto kind = parse_kind(j.at("kind").get<std::string>());
    if (!kind) throw ParseError(fmt::format("primitive '{}' has an unknown kind", p.id));
    p.kind = *kind;
    p.strokes = strokes_from_json(j.at("strokes"));
    p.source_width = num(j.at("source_width"), "source_width");
    p.source_height = num(j.at("source_height"), "source_height");
    p.source_aspect = j.contains("source_aspect") ? num(j.at("source_aspect"), "source_aspect")
                                                  : p.source_width / p.source_height;
    if (j.contains("source_font_size")) p.source_font_size = num(j.at("source_font_size"), "source_font_size");
    auto split = parse_split(j.value("split", std::string("train")));
    if (!split) throw ParseError(fmt::format("primitive '{}' has an unknown split", p.id));
    p.split = *split;
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("malformed primitive record: {}", e.what()));
  }
  validate(p);
  return p;
}

json sketch_to_json(const Sketch& sketch) {
  json j = json::object();
  j["canvas"] = {{"width", coord(sketch.canvas.width)}, {"height", coord(sketch.canvas.height)}};
  j["strokes"] = strokes_to_json(sketch.strokes);
  if (sketch.groups) {
    json g = json::object();
    for (const auto& [name, idx] : *sketch.groups) g[name] = idx;
    j["groups"] = std::move(g);
  }
  return j;
}

Sketch sketch_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("sketch record must be an object");
  Sketch s;
  try {
    const auto& c = j.at("canvas");
    s.canvas = {num(c.at("width"), "canvas.width"), num(c.at("height"), "canvas.height")};
    s.strokes = strokes_from_json(j.at("strokes"));
    if (j.contains("groups")) {
      std::map<std::string, std::vector<std::size_t>> groups;
      for (auto it = j.at("groups").begin(); it != j.at("groups").end(); ++it)
        groups[it.key()] = it.value().get<std::vector<std::size_t>>();
      s.groups = std::move(groups);
    }
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("malformed sketch record: {}", e.what()));
  }
  validate(s);
  return s;
}

std::string primitive_to_line(const Primitive& p) { return primitive_to_json(p).dump() + "\n"; }
std::string sketch_to_line(const Sketch& s) { return sketch_to_json(s).dump() + "\n"; }

std::vector<Primitive> read_primitives(std::istream& in) {
  std::vector<Primitive> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(primitive_from_json(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw ParseError(fmt::format("primitive line {}: {}", lineno, e.what()), e.byte);
    } catch (const Error& e) {
      throw ParseError(fmt::format("primitive line {}: {}", lineno, e.what()));
    }
  }
  return out;
}

std::vector<Primitive> load_primitives(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open primitive file {}", path.string()));
  return read_primitives(in);
}

void write_primitives(std::ostream& out, const std::vector<Primitive>& primitives) {
  for (const auto& p : primitives) out << primitive_to_line(p);
}

Sketch parse_sketch_record(std::string_view line) {
  try {
    return sketch_from_json(json::parse(line.begin(), line.end()));
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("malformed sketch record: {}", e.what()), e.byte);
  }
}

Sketch load_sketch(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const auto start = bytes.find_first_not_of(" \t\r\n");
  if (start == std::string::npos) throw ParseError(fmt::format("sketch file {} is empty", path.string()));
  auto end = bytes.find('\n', start);
  return parse_sketch_record(std::string_view(bytes).substr(start, end == std::string::npos ? end : end - start));
}

void save_sketch(const std::filesystem::path& path, const Sketch& sketch) {
  write_file_atomic(path, sketch_to_line(sketch));
}

}  // namespace s2l
