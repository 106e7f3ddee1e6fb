#include "s2l/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "s2l/levenshtein.hpp"

namespace s2l {

namespace {

double intersection(const BBox& a, const BBox& b) {
  const double w = std::min(a.xmax(), b.xmax()) - std::max(a.xmin, b.xmin);
  const double h = std::min(a.ymax(), b.ymax()) - std::max(a.ymin, b.ymin);
  return w > 0.0 && h > 0.0 ? w * h : 0.0;
}

std::vector<BBox> normalized_boxes(const Layout& layout) {
  std::vector<BBox> out;
  out.reserve(layout.assets.size());
  for (const auto& a : layout.assets) out.push_back(normalized(a.bbox, layout.canvas));
  return out;
}

}  // namespace

BBox normalized(const BBox& box, const Canvas& canvas) {
  return {box.xmin / canvas.width, box.ymin / canvas.height, box.width / canvas.width, box.height / canvas.height};
}

double iou_boxes(const BBox& a, const BBox& b) {
  const double inter = intersection(a, b);
  const double uni = a.area() + b.area() - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double iou_named(const Layout& pred, const Layout& ref) {
  if (ref.assets.empty()) return pred.assets.empty() ? 1.0 : 0.0;
  std::map<std::string_view, const Asset*> by_name;
  for (const auto& a : pred.assets) by_name.emplace(a.name, &a);
  double sum = 0.0;
  for (const auto& r : ref.assets) {
    auto it = by_name.find(r.name);
    if (it == by_name.end()) continue;
    sum += iou_boxes(normalized(it->second->bbox, pred.canvas), normalized(r.bbox, ref.canvas));
  }
  return sum / static_cast<double>(ref.assets.size());
}

ScoreMatrix iou_matrix(const Layout& pred, const Layout& ref, const MatchOptions& options) {
  const auto pb = normalized_boxes(pred), rb = normalized_boxes(ref);
  ScoreMatrix m(pb.size(), rb.size());
  for (std::size_t i = 0; i < pb.size(); ++i)
    for (std::size_t j = 0; j < rb.size(); ++j)
      m(i, j) = options.kind_constrained && pred.assets[i].kind != ref.assets[j].kind ? 0.0 : iou_boxes(pb[i], rb[j]);
  return m;
}

double miou(const Layout& pred, const Layout& ref, const MatchOptions& options) {
  const std::size_t denom = std::max(pred.assets.size(), ref.assets.size());
  if (denom == 0) return 1.0;
  const ScoreMatrix m = iou_matrix(pred, ref, options);
  auto assignment = max_matching(m);
  // Sum in reference order, the same order iou_named uses.
  std::sort(assignment.pairs.begin(), assignment.pairs.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  double sum = 0.0;
  for (auto [r, c] : assignment.pairs) sum += m(r, c);
  return std::clamp(sum / static_cast<double>(denom), 0.0, 1.0);
}

std::vector<std::string> reading_order(const Layout& layout) {
  struct Key {
    double cy, cx;
    const std::string* name;
  };
  std::vector<Key> keys;
  keys.reserve(layout.assets.size());
  for (const auto& a : layout.assets) {
    const BBox b = normalized(a.bbox, layout.canvas);
    keys.push_back({b.center_y(), b.center_x(), &a.name});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    return std::tie(a.cy, a.cx, *a.name) < std::tie(b.cy, b.cx, *b.name);
  });
  std::vector<std::string> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(*k.name);
  return out;
}

double cos_score(const Layout& pred, const Layout& ref) {
  const auto pred_order = reading_order(pred), ref_order = reading_order(ref);
  const std::size_t longest = std::max(pred_order.size(), ref_order.size());
  if (longest == 0) return 1.0;
  std::map<std::string_view, int> symbol;
  for (const auto& n : ref_order) symbol.emplace(n, static_cast<int>(symbol.size()));
  for (const auto& n : pred_order) symbol.emplace(n, static_cast<int>(symbol.size()));
  std::vector<int> y, y_hat;
  for (const auto& n : ref_order) y.push_back(symbol.at(n));
  for (const auto& n : pred_order) y_hat.push_back(symbol.at(n));
  // Integer numerator keeps simple ratios such as 1/3 exact.
  const std::size_t d = std::min(levenshtein(y_hat, y), longest);
  return static_cast<double>(longest - d) / static_cast<double>(longest);
}

double alignment(const Layout& layout) {
  const auto boxes = normalized_boxes(layout);
  const std::size_t n = boxes.size();
  if (n < 2) return 0.0;
  auto lines = [](const BBox& b) {
    return std::array<double, 6>{b.xmin, b.center_x(), b.xmax(), b.ymin, b.center_y(), b.ymax()};
  };
  std::vector<std::array<double, 6>> all;
  all.reserve(n);
  for (const auto& b : boxes) all.push_back(lines(b));
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t line = 0; line < 6; ++line)
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) best = std::min(best, std::fabs(all[i][line] - all[j][line]));
    total += best;
  }
  return total / static_cast<double>(n);
}

double overlap(const Layout& layout, const OverlapOptions& options) {
  std::vector<BBox> boxes;
  for (const auto& a : layout.assets) {
    if (!options.include_background && is_background(a)) continue;
    const BBox b = normalized(a.bbox, layout.canvas);
    if (b.area() > 0.0) boxes.push_back(b);
  }
  if (boxes.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    double covered = 0.0;
    for (std::size_t j = 0; j < boxes.size(); ++j)
      if (j != i) covered += intersection(boxes[i], boxes[j]);
    total += covered / boxes[i].area();
  }
  return total / static_cast<double>(boxes.size());
}

}  // namespace s2l
