#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace s2l {

struct Canvas {
  double width = 0.0;
  double height = 0.0;

  bool operator==(const Canvas&) const = default;
};

// Axis-aligned box, top-left origin, y pointing down.
struct BBox {
  double xmin = 0.0;
  double ymin = 0.0;
  double width = 0.0;
  double height = 0.0;

  double xmax() const { return xmin + width; }
  double ymax() const { return ymin + height; }
  double area() const { return width * height; }
  double center_x() const { return xmin + 0.5 * width; }
  double center_y() const { return ymin + 0.5 * height; }

  bool operator==(const BBox&) const = default;
};

enum class Kind { Text, Image };

std::string_view to_string(Kind kind);
// Accepts "text"/"image" in any case, plus the TEXT/IMAGE enum spellings.
std::optional<Kind> parse_kind(std::string_view s);

struct Asset {
  std::string name;
  Kind kind = Kind::Text;
  std::string label;  // free-form category, e.g. "title", "figure", "background"
  BBox bbox;
  std::optional<std::string> text_content;            // Text only
  std::optional<std::string> image_ref;               // Image only
  std::optional<double> font_size;                    // Text only
  std::optional<std::pair<double, double>> intrinsic_size;  // Image only, (width, height)

  bool operator==(const Asset&) const = default;
};

struct Layout {
  Canvas canvas;
  std::vector<Asset> assets;

  const Asset* find(std::string_view name) const;

  bool operator==(const Layout&) const = default;
};

// Frame used when a document does not declare its canvas.
inline constexpr Canvas kDefaultCanvas{1000.0, 1000.0};

void validate(const Canvas& canvas);
void validate(const BBox& bbox, std::string_view context = {});
void validate(const Asset& asset);
// Throws ValidationError on the first broken invariant (including duplicate
// asset names).
void validate(const Layout& layout);

// Non-fatal findings, e.g. boxes that extend past the canvas.
std::vector<std::string> layout_warnings(const Layout& layout);

bool is_background(const Asset& asset);

// Kind guess for records that omit it: image-only fields, an image-like label
// or an image-like name prefix mean Image, otherwise Text.
Kind infer_kind(std::string_view name, std::string_view label, bool has_image_fields);

}  // namespace s2l
