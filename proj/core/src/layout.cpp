#include "s2l/layout.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <string>

#include <fmt/format.h>

#include "s2l/error.hpp"

namespace s2l {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

std::string_view to_string(Kind kind) { return kind == Kind::Image ? "image" : "text"; }

std::optional<Kind> parse_kind(std::string_view s) {
  const std::string l = lower(s);
  if (l == "text") return Kind::Text;
  if (l == "image") return Kind::Image;
  return std::nullopt;
}

const Asset* Layout::find(std::string_view name) const {
  for (const auto& a : assets)
    if (a.name == name) return &a;
  return nullptr;
}

void validate(const Canvas& canvas) {
  if (!finite(canvas.width) || !finite(canvas.height) || canvas.width <= 0 || canvas.height <= 0)
    throw ValidationError(fmt::format("canvas must be positive and finite, got {} x {}", canvas.width, canvas.height));
}

void validate(const BBox& b, std::string_view context) {
  const std::string where = context.empty() ? std::string("bbox") : fmt::format("bbox of '{}'", context);
  if (!finite(b.xmin) || !finite(b.ymin) || !finite(b.width) || !finite(b.height))
    throw ValidationError(where + " has a non-finite value");
  if (b.width < 0 || b.height < 0)
    throw ValidationError(fmt::format("{} has negative size ({} x {})", where, b.width, b.height));
}

void validate(const Asset& a) {
  if (a.name.empty()) throw ValidationError("asset name must not be empty");
  validate(a.bbox, a.name);
  if (a.kind == Kind::Text) {
    if (a.image_ref || a.intrinsic_size)
      throw ValidationError(fmt::format("text asset '{}' carries image fields", a.name));
    if (a.font_size && (!finite(*a.font_size) || *a.font_size <= 0))
      throw ValidationError(fmt::format("text asset '{}' has invalid font_size", a.name));
  } else {
    if (a.text_content || a.font_size)
      throw ValidationError(fmt::format("image asset '{}' carries text fields", a.name));
    if (a.intrinsic_size) {
      auto [w, h] = *a.intrinsic_size;
      if (!finite(w) || !finite(h) || w < 0 || h < 0)
        throw ValidationError(fmt::format("image asset '{}' has invalid intrinsic size", a.name));
    }
  }
}

void validate(const Layout& layout) {
  validate(layout.canvas);
  std::set<std::string_view> seen;
  for (const auto& a : layout.assets) {
    validate(a);
    if (!seen.insert(a.name).second) throw ValidationError(fmt::format("duplicate asset name '{}'", a.name));
  }
}

std::vector<std::string> layout_warnings(const Layout& layout) {
  std::vector<std::string> out;
  const double eps = 1e-9;
  for (const auto& a : layout.assets) {
    const auto& b = a.bbox;
    if (b.xmin < -eps || b.ymin < -eps || b.xmax() > layout.canvas.width + eps ||
        b.ymax() > layout.canvas.height + eps)
      out.push_back(fmt::format("asset '{}' extends past the {}x{} canvas", a.name, layout.canvas.width,
                                layout.canvas.height));
    if (b.area() == 0.0) out.push_back(fmt::format("asset '{}' has a zero-area box", a.name));
  }
  return out;
}

bool is_background(const Asset& asset) {
  if (!asset.label.empty()) return lower(asset.label) == "background";
  return lower(asset.name) == "background";
}

Kind infer_kind(std::string_view name, std::string_view label, bool has_image_fields) {
  if (has_image_fields) return Kind::Image;
  static constexpr std::string_view kImageWords[] = {"image", "figure", "picture", "background", "table",
                                                     "photo", "logo"};
  const std::string l = lower(label.empty() ? name : label);
  for (auto w : kImageWords)
    if (l.rfind(w, 0) == 0) return Kind::Image;
  return Kind::Text;
}

}  // namespace s2l
