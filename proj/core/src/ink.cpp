#include "s2l/ink.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "s2l/error.hpp"

namespace s2l {

Stroke Stroke::from_points(std::vector<InkPoint> points) {
  if (points.empty()) throw ValidationError("stroke needs at least one point");
  if (points.size() == 1) points.push_back(points.front());
  return Stroke{std::move(points)};
}

double Stroke::length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i)
    len += std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y);
  return len;
}

std::string_view to_string(Split split) { return split == Split::Train ? "train" : "validation"; }

std::optional<Split> parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "validation" || s == "val") return Split::Validation;
  return std::nullopt;
}

void validate(const Stroke& stroke) {
  if (stroke.points.size() < 2) throw ValidationError("stroke needs at least two points");
  for (std::size_t i = 0; i < stroke.points.size(); ++i) {
    const auto& p = stroke.points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.t))
      throw ValidationError("stroke point is not finite");
    if (p.t < 0) throw ValidationError("stroke timestamp is negative");
    if (i > 0 && p.t < stroke.points[i - 1].t) throw ValidationError("stroke timestamps decrease");
  }
}

void validate(const Primitive& p) {
  if (p.id.empty()) throw ValidationError("primitive id must not be empty");
  if (p.strokes.empty()) throw ValidationError(fmt::format("primitive '{}' has no strokes", p.id));
  const double lo = -kOverdrawTolerance, hi = 1.0 + kOverdrawTolerance;
  for (const auto& s : p.strokes) {
    validate(s);
    for (const auto& pt : s.points)
      if (pt.x < lo || pt.x > hi || pt.y < lo || pt.y > hi)
        throw ValidationError(fmt::format("primitive '{}' has a point outside the normalized frame", p.id));
  }
  if (!(p.source_width > 0) || !(p.source_height > 0) || !std::isfinite(p.source_width) ||
      !std::isfinite(p.source_height))
    throw ValidationError(fmt::format("primitive '{}' needs a positive source size", p.id));
  if (!(p.source_aspect > 0) || !std::isfinite(p.source_aspect))
    throw ValidationError(fmt::format("primitive '{}' needs a positive source aspect", p.id));
  if (p.kind == Kind::Text) {
    if (!p.source_font_size || !(*p.source_font_size > 0) || !std::isfinite(*p.source_font_size))
      throw ValidationError(fmt::format("text primitive '{}' needs a positive source_font_size", p.id));
  } else if (p.source_font_size) {
    throw ValidationError(fmt::format("image primitive '{}' must not carry a font size", p.id));
  }
}

void validate(const Sketch& sketch) {
  validate(sketch.canvas);
  for (const auto& s : sketch.strokes) validate(s);
  if (!sketch.groups) return;
  std::set<std::size_t> used;
  for (const auto& [name, indices] : *sketch.groups) {
    for (auto i : indices) {
      if (i >= sketch.strokes.size())
        throw ValidationError(fmt::format("group '{}' references stroke {} of {}", name, i, sketch.strokes.size()));
      if (!used.insert(i).second) throw ValidationError(fmt::format("stroke {} belongs to two groups", i));
    }
  }
}

BBox stroke_bbox(const Stroke& stroke) {
  return strokes_bbox(std::span<const Stroke>(&stroke, 1));
}

BBox strokes_bbox(std::span<const Stroke> strokes, std::span<const std::size_t> indices) {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  auto visit = [&](const Stroke& s) {
    for (const auto& p : s.points) {
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
  };
  if (indices.empty()) {
    for (const auto& s : strokes) visit(s);
  } else {
    for (auto i : indices) visit(strokes[i]);
  }
  if (x0 > x1) return {};
  return {x0, y0, x1 - x0, y1 - y0};
}

}  // namespace s2l
