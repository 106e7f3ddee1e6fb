#include "s2l/sketch_parser.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "s2l/matching.hpp"

namespace s2l {

namespace {

constexpr double kPi = 3.14159265358979323846;

double box_gap(const BBox& a, const BBox& b) {
  const double dx = std::max({0.0, a.xmin - b.xmax(), b.xmin - a.xmax()});
  const double dy = std::max({0.0, a.ymin - b.ymax(), b.ymin - a.ymax()});
  return std::hypot(dx, dy);
}

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

BBox clamp_to(const BBox& b, const Canvas& c) {
  const double x0 = std::clamp(b.xmin, 0.0, c.width), y0 = std::clamp(b.ymin, 0.0, c.height);
  const double x1 = std::clamp(b.xmax(), 0.0, c.width), y1 = std::clamp(b.ymax(), 0.0, c.height);
  return {x0, y0, std::max(0.0, x1 - x0), std::max(0.0, y1 - y0)};
}

// Expected relative size of an asset, when its description carries one.
struct SizeHint {
  std::optional<double> width, height;  // canvas fractions
  std::optional<double> aspect;
};

SizeHint size_hint(const Asset& a, const Canvas& c) {
  SizeHint h;
  if (a.bbox.area() > 0.0) {
    h.width = a.bbox.width / c.width;
    h.height = a.bbox.height / c.height;
    h.aspect = a.bbox.width / a.bbox.height;
  } else if (a.intrinsic_size && a.intrinsic_size->first > 0 && a.intrinsic_size->second > 0) {
    h.aspect = a.intrinsic_size->first / a.intrinsic_size->second;
  }
  return h;
}

double size_similarity(const SizeHint& hint, const BBox& group, const Canvas& c) {
  constexpr double eps = 1e-6;
  const double gw = std::max(group.width, eps * c.width), gh = std::max(group.height, eps * c.height);
  double sim = 1.0;
  if (hint.aspect) sim *= std::exp(-std::fabs(std::log((gw / gh) / *hint.aspect)));
  if (hint.width && hint.height) {
    const double garea = (gw / c.width) * (gh / c.height);
    sim *= std::exp(-0.5 * std::fabs(std::log(garea / (*hint.width * *hint.height))));
  }
  return sim;
}

}  // namespace

InkDirections ink_directions(std::span<const Stroke> strokes, std::span<const std::size_t> indices,
                             double phi_degrees) {
  double total = 0.0, horizontal = 0.0, diagonal = 0.0;
  auto visit = [&](const Stroke& s) {
    for (std::size_t i = 1; i < s.points.size(); ++i) {
      const double dx = s.points[i].x - s.points[i - 1].x, dy = s.points[i].y - s.points[i - 1].y;
      const double len = std::hypot(dx, dy);
      if (len == 0.0) continue;
      total += len;
      const double angle = std::atan2(std::fabs(dy), std::fabs(dx)) * 180.0 / kPi;
      if (angle <= phi_degrees)
        horizontal += len;
      else if (angle < 90.0 - phi_degrees)
        diagonal += len;
    }
  };
  if (indices.empty()) {
    for (const auto& s : strokes) visit(s);
  } else {
    for (auto i : indices) visit(strokes[i]);
  }
  if (total == 0.0) return {1.0, 0.0};  // a dot reads as text
  return {horizontal / total, diagonal / total};
}

Classification classify_group(const StrokeGroup& group, std::span<const Stroke> strokes, const ParserParams& params) {
  const InkDirections d = ink_directions(strokes, group.strokes, params.phi_degrees);
  const double lo = std::min(group.bbox.width, group.bbox.height), hi = std::max(group.bbox.width, group.bbox.height);
  const bool rectangle_like = hi > 0.0 && lo / hi >= 0.1;
  auto margin = [](double value, double threshold) {
    return threshold >= 1.0 ? 1.0 : std::clamp((value - threshold) / (1.0 - threshold), 0.0, 1.0);
  };
  if (rectangle_like && d.diagonal > params.theta_diag)
    return {GroupClass::ImageLike, margin(d.diagonal, params.theta_diag)};
  if (d.horizontal >= params.rho) return {GroupClass::TextLike, margin(d.horizontal, params.rho)};
  // Neither rule fired: closest to its threshold wins, with no confidence.
  const double image_ratio = rectangle_like ? d.diagonal / std::max(params.theta_diag, 1e-9) : 0.0;
  const double text_ratio = d.horizontal / std::max(params.rho, 1e-9);
  return {image_ratio > text_ratio ? GroupClass::ImageLike : GroupClass::TextLike, 0.0};
}

std::vector<StrokeGroup> cluster_strokes(const Sketch& sketch, const ParserParams& params) {
  const auto& strokes = sketch.strokes;
  const std::size_t n = strokes.size();
  std::vector<BBox> boxes;
  boxes.reserve(n);
  for (const auto& s : strokes) boxes.push_back(stroke_bbox(s));
  const double threshold = params.tau * std::hypot(sketch.canvas.width, sketch.canvas.height);

  DisjointSet sets(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (box_gap(boxes[i], boxes[j]) <= threshold) sets.unite(i, j);

  std::map<std::size_t, std::vector<std::size_t>> members;  // root = smallest index
  for (std::size_t i = 0; i < n; ++i) members[sets.find(i)].push_back(i);

  std::vector<StrokeGroup> groups;
  groups.reserve(members.size());
  for (auto& [root, idx] : members) {
    StrokeGroup g;
    g.strokes = std::move(idx);
    g.bbox = strokes_bbox(strokes, g.strokes);
    const auto c = classify_group(g, strokes, params);
    g.classification = c.kind;
    g.score = c.score;
    groups.push_back(std::move(g));
  }
  return groups;
}

ParsedLayout assign_assets(std::span<const StrokeGroup> groups, std::span<const Asset> assets, const Canvas& canvas) {
  ParsedLayout out;
  out.layout.canvas = canvas;
  out.layout.assets.assign(assets.begin(), assets.end());
  out.fallback.assign(assets.size(), true);

  // Reading rank of each group, used as a weak prior that assets are listed
  // roughly in reading order.
  std::vector<std::size_t> group_rank(groups.size());
  {
    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto &ga = groups[a].bbox, &gb = groups[b].bbox;
      if (ga.center_y() != gb.center_y()) return ga.center_y() < gb.center_y();
      if (ga.center_x() != gb.center_x()) return ga.center_x() < gb.center_x();
      return a < b;
    });
    for (std::size_t r = 0; r < order.size(); ++r) group_rank[order[r]] = r;
  }

  if (!groups.empty() && !assets.empty()) {
    ScoreMatrix w(assets.size(), groups.size());
    const double na = static_cast<double>(assets.size()), ng = static_cast<double>(groups.size());
    for (std::size_t i = 0; i < assets.size(); ++i) {
      const SizeHint hint = size_hint(assets[i], canvas);
      const GroupClass wanted = assets[i].kind == Kind::Image ? GroupClass::ImageLike : GroupClass::TextLike;
      for (std::size_t j = 0; j < groups.size(); ++j) {
        const double compat = groups[j].classification == wanted ? 1.0 : 0.2;
        const double order = 1.0 - std::fabs((i + 0.5) / na - (group_rank[j] + 0.5) / ng);
        w(i, j) = compat * size_similarity(hint, groups[j].bbox, canvas) * (0.9 + 0.1 * order);
      }
    }
    for (auto [i, j] : max_matching(w).pairs) {
      out.layout.assets[i].bbox = clamp_to(groups[j].bbox, canvas);
      out.fallback[i] = false;
    }
  }

  // Stack the leftovers below the placed content.
  double y = 0.0;
  for (std::size_t i = 0; i < assets.size(); ++i)
    if (!out.fallback[i]) y = std::max(y, out.layout.assets[i].bbox.ymax());
  std::vector<std::size_t> pending;
  double total = 0.0;
  for (std::size_t i = 0; i < assets.size(); ++i) {
    if (!out.fallback[i]) continue;
    pending.push_back(i);
    const SizeHint hint = size_hint(assets[i], canvas);
    BBox& b = out.layout.assets[i].bbox;
    b.width = std::min(hint.width.value_or(0.5), 1.0) * canvas.width;
    b.height = std::min(hint.height.value_or(0.05), 1.0) * canvas.height;
    total += b.height;
  }
  if (!pending.empty()) {
    double scale = 1.0;
    if (y + total > canvas.height) {
      if (canvas.height - y >= 0.1 * canvas.height) {
        scale = (canvas.height - y) / total;
      } else {
        scale = std::min(1.0, canvas.height / total);
        y = canvas.height - total * scale;
      }
    }
    for (auto i : pending) {
      BBox& b = out.layout.assets[i].bbox;
      b.height *= scale;
      b.xmin = 0.0;
      b.ymin = y;
      y += b.height;
      b = clamp_to(b, canvas);
    }
  }
  return out;
}

ParsedLayout parse_sketch(const Sketch& sketch, std::span<const Asset> assets, const ParserParams& params) {
  const auto groups = cluster_strokes(sketch, params);
  return assign_assets(groups, assets, sketch.canvas);
}

}  // namespace s2l
