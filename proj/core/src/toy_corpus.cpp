#include "s2l/toy_corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "s2l/rng.hpp"

namespace s2l::toy {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMargin = 100.0;
constexpr double kLineSpacing = 1.4;

double between(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

struct Block {
  Kind kind;
  std::string label;
  double width, height;
  std::optional<double> font_size;
};

Block paragraph(Rng& rng, double max_width) {
  const double font = std::round(between(rng, 12.0, 20.0) * 2.0) / 2.0;
  const auto lines = 2 + rng.uniform_index(11);
  const double width = std::round(between(rng, 0.75, 1.0) * max_width);
  return {Kind::Text, "text", width, std::round(static_cast<double>(lines) * kLineSpacing * font), font};
}

Block title(Rng& rng, double max_width) {
  const double font = std::round(between(rng, 28.0, 40.0));
  const double width = std::round(between(rng, 0.5, 0.9) * max_width);
  return {Kind::Text, "title", width, std::round(2.0 * kLineSpacing * font), font};
}

Block figure(Rng& rng, double max_width) {
  const double width = std::round(between(rng, std::min(400.0, max_width), max_width));
  const double aspect = between(rng, 0.6, 2.0);
  return {Kind::Image, "figure", width, std::round(std::min(width / aspect, 700.0)), std::nullopt};
}

Block any_block(Rng& rng, double max_width) {
  const double u = rng.uniform();
  if (u < 0.15) return title(rng, max_width);
  if (u < 0.6) return paragraph(rng, max_width);
  return figure(rng, max_width);
}

}  // namespace

Primitive text_primitive(Rng& rng, double width, double height, double font_size) {
  const auto lines = static_cast<std::size_t>(std::max(1.0, std::round(height / (kLineSpacing * font_size))));
  Primitive p;
  p.kind = Kind::Text;
  p.source_width = width;
  p.source_height = height;
  p.source_aspect = width / height;
  p.source_font_size = font_size;
  const double amplitude = std::min(0.08 * font_size, 0.2 * height / static_cast<double>(lines)) / height;
  for (std::size_t i = 0; i < lines; ++i) {
    const double base = (static_cast<double>(i) + 0.5) / static_cast<double>(lines);
    const double x0 = between(rng, 0.005, 0.03);
    const double x1 = (i + 1 == lines && lines > 2) ? between(rng, 0.4, 0.95) : between(rng, 0.96, 0.995);
    const auto n = std::max<std::size_t>(8, static_cast<std::size_t>((x1 - x0) * width / 20.0));
    const double phase = between(rng, 0.0, 2.0 * kPi);
    const double period = between(rng, 80.0, 160.0) / width;  // normalized x per wobble
    std::vector<InkPoint> pts;
    pts.reserve(n);
    double t = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = x0 + (x1 - x0) * static_cast<double>(j) / static_cast<double>(n - 1);
      const double y = base + amplitude * std::sin(phase + 2.0 * kPi * x / period);
      pts.push_back({x, std::clamp(y, -0.03, 1.03), t});
      t += static_cast<double>(8 + rng.uniform_index(9));
    }
    p.strokes.push_back(Stroke::from_points(std::move(pts)));
  }
  return p;
}

Primitive image_primitive(Rng& rng, double width, double height) {
  Primitive p;
  p.kind = Kind::Image;
  p.source_width = width;
  p.source_height = height;
  p.source_aspect = width / height;
  auto jitter = [&](double v) { return std::clamp(v + between(rng, -0.015, 0.015), -0.03, 1.03); };
  const std::array<std::pair<double, double>, 4> corners{
      {{jitter(0.0), jitter(0.0)}, {jitter(1.0), jitter(0.0)}, {jitter(1.0), jitter(1.0)}, {jitter(0.0), jitter(1.0)}}};
  auto segment = [&](std::pair<double, double> a, std::pair<double, double> b, std::vector<InkPoint>& pts, double& t,
                     bool include_start) {
    constexpr int kSteps = 10;
    for (int s = include_start ? 0 : 1; s <= kSteps; ++s) {
      const double f = static_cast<double>(s) / kSteps;
      pts.push_back({a.first + (b.first - a.first) * f, a.second + (b.second - a.second) * f, t});
      t += static_cast<double>(8 + rng.uniform_index(9));
    }
  };
  {
    std::vector<InkPoint> outline;
    double t = 0.0;
    for (int e = 0; e < 4; ++e) segment(corners[e], corners[(e + 1) % 4], outline, t, e == 0);
    p.strokes.push_back(Stroke::from_points(std::move(outline)));
  }
  for (auto [a, b] : {std::pair{0, 2}, std::pair{1, 3}}) {
    std::vector<InkPoint> diagonal;
    double t = 0.0;
    segment(corners[a], corners[b], diagonal, t, true);
    p.strokes.push_back(Stroke::from_points(std::move(diagonal)));
  }
  return p;
}

Layout random_layout(Rng& rng) {
  Layout layout{kPage, {}};
  std::map<std::string, std::size_t> counters;
  const double usable = kPage.width - 2.0 * kMargin;
  const double column = (usable - kMargin) / 2.0;
  auto place = [&](const Block& b, double x, double y) {
    Asset a;
    a.label = b.label;
    a.name = b.label + std::to_string(counters[b.label]++);
    a.kind = b.kind;
    a.bbox = {x, y, b.width, b.height};
    a.font_size = b.font_size;
    if (b.kind == Kind::Image) {
      a.image_ref = a.name + ".png";
      a.intrinsic_size = std::pair{b.width * 2.0, b.height * 2.0};
    }
    layout.assets.push_back(std::move(a));
  };

  double y = kMargin;
  for (int row = 0; layout.assets.size() < 12; ++row) {
    std::vector<Block> blocks;
    const double u = rng.uniform();
    if (row == 0 && u < 0.7) {
      blocks.push_back(title(rng, usable));
    } else if (u < 0.3) {
      blocks.push_back(any_block(rng, column));
      blocks.push_back(any_block(rng, column));
    } else if (u < 0.75) {
      blocks.push_back(paragraph(rng, usable));
    } else {
      blocks.push_back(figure(rng, usable));
    }
    double h = 0.0;
    for (const auto& b : blocks) h = std::max(h, b.height);
    if (y + h > kPage.height - kMargin) break;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      place(blocks[i], blocks.size() == 1 ? kMargin : kMargin + static_cast<double>(i) * (column + kMargin), y);
    y += h + std::round(between(rng, 80.0, 160.0));
  }
  return layout;
}

std::vector<LayoutRecord> corpus(std::size_t count, std::uint64_t seed) {
  std::vector<LayoutRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, {"toy-layout", std::to_string(i)}));
    out.push_back({fmt::format("toy_{:03d}", i), random_layout(rng)});
  }
  return out;
}

std::vector<Primitive> primitive_pool(std::size_t train, std::size_t validation, std::uint64_t seed) {
  std::vector<Primitive> out;
  out.reserve(train + validation);
  const double usable = kPage.width - 2.0 * kMargin;
  for (std::size_t i = 0; i < train + validation; ++i) {
    Rng rng(derive_seed(seed, {"toy-primitive", std::to_string(i)}));
    const double max_width = rng.bernoulli(0.3) ? (usable - kMargin) / 2.0 : usable;
    Primitive p;
    if (i % 2 == 0) {
      const Block b = rng.bernoulli(0.2) ? title(rng, max_width) : paragraph(rng, max_width);
      p = text_primitive(rng, b.width, b.height, *b.font_size);
    } else {
      const Block b = figure(rng, max_width);
      p = image_primitive(rng, b.width, b.height);
    }
    p.id = fmt::format("toy_p{:04d}", i);
    p.split = i < train ? Split::Train : Split::Validation;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace s2l::toy
