#include "s2l/ink_render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <utility>

#include <fmt/format.h>

#include "s2l/detail/number.hpp"
#include "s2l/error.hpp"

namespace s2l {

using detail::format_number;

std::string render_sketch_svg(const Sketch& sketch, double stroke_width) {
  const std::string w = format_number(sketch.canvas.width), h = format_number(sketch.canvas.height);
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      w, h);
  out += fmt::format("  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n", w, h);
  out += fmt::format(
      "  <g fill=\"none\" stroke=\"#000000\" stroke-width=\"{}\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n",
      format_number(stroke_width));
  for (const auto& s : sketch.strokes) {
    out += "    <polyline points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (i) out += ' ';
      out += format_number(s.points[i].x);
      out += ',';
      out += format_number(s.points[i].y);
    }
    out += "\"/>\n";
  }
  out += "  </g>\n</svg>\n";
  return out;
}

namespace {

class Canvas8 {
 public:
  Canvas8(int w, int h, int stroke_width) : img_{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 255)} {
    // Disc of diameter stroke_width: offsets with (2dx)^2 + (2dy)^2 <= w^2.
    const int r = stroke_width / 2 + 1;
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx)
        if (4 * (dx * dx + dy * dy) <= stroke_width * stroke_width) brush_.emplace_back(dx, dy);
  }

  void stamp(int x, int y) {
    for (auto [dx, dy] : brush_) {
      const int px = x + dx, py = y + dy;
      if (px >= 0 && py >= 0 && px < img_.width && py < img_.height)
        img_.pixels[static_cast<std::size_t>(py) * img_.width + px] = 0;
    }
  }

  // Bresenham centerline, brush stamped at every step.
  void line(int x0, int y0, int x1, int y1) {
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
      stamp(x0, y0);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }

  GrayImage take() { return std::move(img_); }

 private:
  GrayImage img_;
  std::vector<std::pair<int, int>> brush_;
};

}  // namespace

GrayImage rasterize_strokes(const Canvas& canvas, const std::vector<Stroke>& strokes, int out_width, int stroke_width) {
  if (!(canvas.width > 0) || !(canvas.height > 0) || !std::isfinite(canvas.width) || !std::isfinite(canvas.height))
    throw ValidationError("cannot rasterize a zero-area canvas");
  if (out_width <= 0) throw ValidationError("raster width must be positive");
  if (stroke_width <= 0) throw ValidationError("stroke width must be positive");
  const int out_height = std::max(1, static_cast<int>(std::lround(out_width * canvas.height / canvas.width)));
  const double sx = out_width / canvas.width, sy = out_height / canvas.height;
  auto to_px = [](double v, double scale, int limit) {
    const double p = std::floor(v * scale);
    return static_cast<int>(std::clamp(p, -1.0e6, static_cast<double>(limit) + 1.0e6));
  };
  Canvas8 c(out_width, out_height, stroke_width);
  for (const auto& s : strokes) {
    for (std::size_t i = 0; i + 1 < s.points.size(); ++i) {
      const auto& a = s.points[i];
      const auto& b = s.points[i + 1];
      c.line(std::min(to_px(a.x, sx, out_width), out_width - 1), std::min(to_px(a.y, sy, out_height), out_height - 1),
             std::min(to_px(b.x, sx, out_width), out_width - 1), std::min(to_px(b.y, sy, out_height), out_height - 1));
    }
  }
  return c.take();
}

GrayImage rasterize_sketch(const Sketch& sketch, int out_width, int stroke_width) {
  return rasterize_strokes(sketch.canvas, sketch.strokes, out_width, stroke_width);
}

std::string encode_pgm(const GrayImage& image) {
  std::string out = fmt::format("P5\n{} {}\n255\n", image.width, image.height);
  out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
  return out;
}

}  // namespace s2l
