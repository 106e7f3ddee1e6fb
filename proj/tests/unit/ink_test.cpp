#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "s2l/error.hpp"
#include "s2l/ink.hpp"
#include "s2l/ink_io.hpp"
#include "s2l/ink_render.hpp"

namespace s2l {
namespace {

Stroke line(double x0, double y0, double x1, double y1) { return Stroke::from_points({{x0, y0, 0}, {x1, y1, 10}}); }

Stroke random_stroke(oracle::Engine& g, double lo, double hi) {
  std::vector<InkPoint> pts;
  double t = 0;
  const std::size_t n = 2 + oracle::index(g, 20);
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back({oracle::uniform(g, lo, hi), oracle::uniform(g, lo, hi), t});
    t += oracle::uniform(g, 0, 30);
  }
  return Stroke::from_points(std::move(pts));
}

TEST(Stroke, SinglePointIsPadded) {
  const auto s = Stroke::from_points({{3, 4, 5}});
  ASSERT_EQ(s.points.size(), 2u);
  EXPECT_EQ(s.points[0], s.points[1]);
  EXPECT_EQ(stroke_bbox(s), (BBox{3, 4, 0, 0}));
  EXPECT_THROW(Stroke::from_points({}), ValidationError);
}

TEST(Stroke, TimeMustNotDecrease) {
  EXPECT_THROW(validate(Stroke{{{0, 0, 5}, {1, 1, 4}}}), ValidationError);
  EXPECT_THROW(validate(Stroke{{{0, 0, -1}, {1, 1, 4}}}), ValidationError);
  EXPECT_DOUBLE_EQ((Stroke{{{0, 0, 5}, {3, 4, 9}}}).duration_ms(), 4.0);
  EXPECT_DOUBLE_EQ((Stroke{{{0, 0, 5}, {3, 4, 9}}}).length(), 5.0);
}

TEST(Stroke, BboxOfTwoPoints) { EXPECT_EQ(stroke_bbox(line(0, 0, 10, 5)), (BBox{0, 0, 10, 5})); }

TEST(Stroke, BboxContainsEveryPointAndUnionIsComponentwise) {
  oracle::Engine g(5);
  for (int i = 0; i < 200; ++i) {
    std::vector<Stroke> strokes;
    for (std::size_t j = 0, n = 1 + oracle::index(g, 5); j < n; ++j) strokes.push_back(random_stroke(g, -50, 50));
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const auto& s : strokes) {
      const BBox b = stroke_bbox(s);
      for (const auto& p : s.points) {
        EXPECT_TRUE(p.x >= b.xmin && p.x <= b.xmax() + 1e-9 && p.y >= b.ymin && p.y <= b.ymax() + 1e-9);
        x0 = std::min(x0, p.x), y0 = std::min(y0, p.y), x1 = std::max(x1, p.x), y1 = std::max(y1, p.y);
      }
    }
    const BBox u = strokes_bbox(strokes);
    EXPECT_DOUBLE_EQ(u.xmin, x0);
    EXPECT_DOUBLE_EQ(u.ymin, y0);
    EXPECT_NEAR(u.xmax(), x1, 1e-9);
    EXPECT_NEAR(u.ymax(), y1, 1e-9);
  }
}

Primitive sample_primitive(Kind kind) {
  Primitive p;
  p.id = kind == Kind::Text ? "t1" : "i1";
  p.kind = kind;
  p.strokes = {line(0, 0.5, 1, 0.5)};
  p.source_width = 200;
  p.source_height = 40;
  p.source_aspect = 5;
  if (kind == Kind::Text) p.source_font_size = 12;
  return p;
}

TEST(Primitive, InvariantsAreChecked) {
  EXPECT_NO_THROW(validate(sample_primitive(Kind::Text)));
  auto p = sample_primitive(Kind::Text);
  p.strokes[0].points[0].x = -0.11;
  EXPECT_THROW(validate(p), ValidationError);
  p = sample_primitive(Kind::Text);
  p.source_font_size.reset();
  EXPECT_THROW(validate(p), ValidationError);
  p = sample_primitive(Kind::Image);
  p.source_font_size = 3;
  EXPECT_THROW(validate(p), ValidationError);
  p = sample_primitive(Kind::Image);
  p.strokes.clear();
  EXPECT_THROW(validate(p), ValidationError);
}

TEST(Sketch, GroupIndicesMustBeValidAndDisjoint) {
  Sketch s{{100, 100}, {line(0, 0, 1, 1), line(2, 2, 3, 3)}, std::map<std::string, std::vector<std::size_t>>{}};
  (*s.groups)["a"] = {0};
  (*s.groups)["b"] = {1};
  EXPECT_NO_THROW(validate(s));
  (*s.groups)["b"] = {0};
  EXPECT_THROW(validate(s), ValidationError);
  (*s.groups)["b"] = {2};
  EXPECT_THROW(validate(s), ValidationError);
}

TEST(InkIo, PrimitiveLinesRoundTripAfterQuantization) {
  oracle::Engine g(9);
  std::vector<Primitive> pool;
  for (int i = 0; i < 50; ++i) {
    Primitive p = sample_primitive(i % 2 ? Kind::Image : Kind::Text);
    p.id = "p" + std::to_string(i);
    p.strokes.clear();
    for (int j = 0; j < 3; ++j) p.strokes.push_back(quantize(random_stroke(g, -0.05, 1.05)));
    p.split = i % 3 ? Split::Train : Split::Validation;
    pool.push_back(p);
  }
  std::stringstream ss;
  write_primitives(ss, pool);
  EXPECT_EQ(read_primitives(ss), pool);
}

TEST(InkIo, CoordinatesHaveAtMostSixFractionalDigits) {
  Sketch s{{10, 10}, {Stroke{{{1.0 / 3.0, 2.0 / 3.0, 0.1234567891}, {1, 2, 3}}}}, std::nullopt};
  const std::string line_text = sketch_to_line(s);
  EXPECT_NE(line_text.find("0.333333"), std::string::npos);
  EXPECT_EQ(line_text.find("0.3333333"), std::string::npos);
  EXPECT_EQ(line_text.back(), '\n');
  const Sketch back = parse_sketch_record(line_text);
  EXPECT_DOUBLE_EQ(back.strokes[0].points[0].t, 0.123457);
}

TEST(InkIo, MalformedRecordsRaiseParseErrors) {
  EXPECT_THROW(parse_sketch_record("{\"canvas\": {\"width\": 1, \"height\": 1}, \"strokes\": [[[1, 2]]]}"), ParseError);
  EXPECT_THROW(parse_sketch_record("not json"), ParseError);
  std::stringstream ss("{\"id\": \"x\"}\n");
  EXPECT_THROW(read_primitives(ss), ParseError);
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

TEST(SketchSvg, PolylinePerStrokeInOrder) {
  EXPECT_EQ(count(render_sketch_svg(Sketch{{10, 10}, {}, std::nullopt}), "<polyline"), 0u);
  const auto one = render_sketch_svg(Sketch{{10, 10}, {line(1, 2, 3, 4)}, std::nullopt});
  EXPECT_NE(one.find("points=\"1,2 3,4\""), std::string::npos);
  oracle::Engine g(1);
  for (int i = 0; i < 30; ++i) {
    Sketch s{{100, 100}, {}, std::nullopt};
    for (std::size_t j = 0, n = oracle::index(g, 10); j < n; ++j) s.strokes.push_back(random_stroke(g, 0, 100));
    const auto svg = render_sketch_svg(s);
    EXPECT_EQ(count(svg, "<polyline"), s.strokes.size());
    EXPECT_EQ(svg, render_sketch_svg(s));
  }
}

std::size_t dark(const GrayImage& img) {
  return static_cast<std::size_t>(std::count_if(img.pixels.begin(), img.pixels.end(), [](auto p) { return p < 128; }));
}

TEST(Raster, EmptySketchIsWhiteAndHeightFollowsAspect) {
  const auto img = rasterize_sketch(Sketch{{1700, 2200}, {}, std::nullopt}, 170);
  EXPECT_EQ(img.width, 170);
  EXPECT_EQ(img.height, 220);
  EXPECT_EQ(dark(img), 0u);
  EXPECT_THROW(rasterize_sketch(Sketch{{1, 1}, {}, std::nullopt}, 0), ValidationError);
}

TEST(Raster, HorizontalStrokeDarkensOnlyTheMiddleBand) {
  const Sketch s{{1000, 1000}, {line(100, 500, 900, 500)}, std::nullopt};
  const auto img = rasterize_sketch(s, 200, 3);
  std::size_t inside = 0, outside = 0;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      if (img.at(x, y) < 128) (std::abs(y - 100) <= 2 ? inside : outside)++;
  EXPECT_GE(inside, 160u * 3u - 10u);
  EXPECT_EQ(outside, 0u);
  EXPECT_EQ(img, rasterize_sketch(s, 200, 3));
}

TEST(Raster, DoublingWidthDoublesExtents) {
  oracle::Engine g(4);
  for (int i = 0; i < 20; ++i) {
    Sketch s{{800, 600}, {random_stroke(g, 50, 550)}, std::nullopt};
    auto extent = [](const GrayImage& img) {
      int x0 = img.width, x1 = -1, y0 = img.height, y1 = -1;
      for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
          if (img.at(x, y) < 128) x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
      return std::array<int, 2>{x1 - x0, y1 - y0};
    };
    const auto a = extent(rasterize_sketch(s, 200, 1)), b = extent(rasterize_sketch(s, 400, 1));
    EXPECT_NEAR(b[0], 2 * a[0], 2);
    EXPECT_NEAR(b[1], 2 * a[1], 2);
  }
}

TEST(Raster, PgmHeader) {
  const auto img = rasterize_sketch(Sketch{{4, 2}, {}, std::nullopt}, 4);
  const auto pgm = encode_pgm(img);
  EXPECT_EQ(pgm.substr(0, 11), "P5\n4 2\n255\n");
  EXPECT_EQ(pgm.size(), 11u + 8u);
}

}  // namespace
}  // namespace s2l
