#pragma once

#include <string>
#include <vector>

#include "s2l/layout.hpp"
#include "s2l/matching.hpp"

namespace s2l {

// Box expressed as fractions of the canvas.
BBox normalized(const BBox& box, const Canvas& canvas);

// Intersection over union; 0 when the union has no area.
double iou_boxes(const BBox& a, const BBox& b);

// Mean over reference assets of the IoU with the same-named prediction;
// missing names score 0. Two empty layouts score 1.
double iou_named(const Layout& pred, const Layout& ref);

struct MatchOptions {
  // Pairs of different kinds score 0 when set. Off by default: pairing is
  // purely positional.
  bool kind_constrained = false;
};

// Pairwise IoU matrix, rows = pred assets, cols = ref assets.
ScoreMatrix iou_matrix(const Layout& pred, const Layout& ref, const MatchOptions& options = {});

// Best one-to-one pairing total divided by max(|pred|, |ref|). Two empty
// layouts score 1.
double miou(const Layout& pred, const Layout& ref, const MatchOptions& options = {});

// Asset names sorted by box center: y, then x, then name.
std::vector<std::string> reading_order(const Layout& layout);

// 1 - lev(pred order, ref order) / max(length). Every distinct name across
// both layouts is its own symbol. Two empty layouts score 1.
double cos_score(const Layout& pred, const Layout& ref);

// Mean over assets of the smallest gap between one of its alignment lines
// (left, x-center, right, top, y-center, bottom) and the same line of any
// other asset, in canvas-normalized units. Fewer than two assets gives 0.
double alignment(const Layout& layout);

struct OverlapOptions {
  bool include_background = false;
};

// Mean over non-degenerate assets of sum_j area(i ∩ j) / area(i).
double overlap(const Layout& layout, const OverlapOptions& options = {});

}  // namespace s2l
