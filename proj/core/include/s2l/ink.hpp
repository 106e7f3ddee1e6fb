#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "s2l/layout.hpp"

namespace s2l {

struct InkPoint {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;  // ms since stroke start

  bool operator==(const InkPoint&) const = default;
};

struct Stroke {
  std::vector<InkPoint> points;

  // Pads a single-point input to two identical points. Throws on an empty list.
  static Stroke from_points(std::vector<InkPoint> points);

  double duration_ms() const { return points.empty() ? 0.0 : points.back().t - points.front().t; }
  // Total polyline length.
  double length() const;

  bool operator==(const Stroke&) const = default;
};

enum class Split { Train, Validation };

std::string_view to_string(Split split);
std::optional<Split> parse_split(std::string_view s);

// A hand-drawn fragment for one asset kind. Strokes live in the normalized
// frame of the asset it was drawn over: [0,1]^2 plus overdraw.
struct Primitive {
  std::string id;
  Kind kind = Kind::Text;
  std::vector<Stroke> strokes;
  double source_width = 0.0;
  double source_height = 0.0;
  double source_aspect = 0.0;  // width / height
  std::optional<double> source_font_size;  // Text only
  Split split = Split::Train;

  bool operator==(const Primitive&) const = default;
};

inline constexpr double kOverdrawTolerance = 0.1;

// Strokes in canvas coordinates. `groups` maps an asset name to the indices of
// the strokes drawn for it.
struct Sketch {
  Canvas canvas;
  std::vector<Stroke> strokes;
  std::optional<std::map<std::string, std::vector<std::size_t>>> groups;

  bool operator==(const Sketch&) const = default;
};

void validate(const Stroke& stroke);
void validate(const Primitive& primitive);
void validate(const Sketch& sketch);

BBox stroke_bbox(const Stroke& stroke);
// Bounds of a subset of strokes; all strokes when `indices` is empty.
BBox strokes_bbox(std::span<const Stroke> strokes, std::span<const std::size_t> indices = {});

}  // namespace s2l
