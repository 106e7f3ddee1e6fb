#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "s2l/ink.hpp"

namespace s2l {

// One <polyline> per stroke, in stroke order.
std::string render_sketch_svg(const Sketch& sketch, double stroke_width = 2.0);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 0 = black, 255 = white

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  bool operator==(const GrayImage&) const = default;
};

// White background, black round-capped strokes without anti-aliasing.
// Output height is round(out_width * canvas.height / canvas.width);
// `stroke_width` is in output pixels.
GrayImage rasterize_strokes(const Canvas& canvas, const std::vector<Stroke>& strokes, int out_width,
                            int stroke_width = 2);
GrayImage rasterize_sketch(const Sketch& sketch, int out_width, int stroke_width = 2);

// Binary PGM (P5, maxval 255).
std::string encode_pgm(const GrayImage& image);

}  // namespace s2l
