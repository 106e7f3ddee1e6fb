#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "s2l/ink.hpp"
#include "s2l/layout.hpp"

namespace s2l {

enum class GroupClass { TextLike, ImageLike };

struct StrokeGroup {
  std::vector<std::size_t> strokes;  // ascending stroke indices
  BBox bbox;
  GroupClass classification = GroupClass::TextLike;
  double score = 0.0;  // in [0, 1]
};

struct ParserParams {
  double tau = 0.02;          // merge gap, fraction of canvas diagonal
  double theta_diag = 0.3;    // min diagonal ink fraction for ImageLike
  double rho = 0.7;           // min horizontal ink fraction for TextLike
  double phi_degrees = 15.0;  // horizontal tolerance
};

// Single-linkage grouping: strokes whose boxes are within tau * diagonal of
// each other end up in the same group. Groups are ordered by first stroke.
// Classification is filled in.
std::vector<StrokeGroup> cluster_strokes(const Sketch& sketch, const ParserParams& params = {});

struct Classification {
  GroupClass kind = GroupClass::TextLike;
  double score = 0.0;
};

// Fractions of ink length, weighted by segment length.
struct InkDirections {
  double horizontal = 0.0;  // within ±phi of horizontal
  double diagonal = 0.0;    // more than phi away from both axes
};

// All strokes when `indices` is empty.
InkDirections ink_directions(std::span<const Stroke> strokes, std::span<const std::size_t> indices,
                             double phi_degrees);

Classification classify_group(const StrokeGroup& group, std::span<const Stroke> strokes,
                              const ParserParams& params = {});

struct ParsedLayout {
  Layout layout;                // assets in input order
  std::vector<bool> fallback;   // per asset: placed without stroke evidence
};

// Matches assets to groups by kind compatibility and size similarity, copies
// group boxes onto matched assets and stacks the rest below.
ParsedLayout assign_assets(std::span<const StrokeGroup> groups, std::span<const Asset> assets,
                           const Canvas& canvas);

// cluster_strokes followed by assign_assets.
ParsedLayout parse_sketch(const Sketch& sketch, std::span<const Asset> assets, const ParserParams& params = {});

}  // namespace s2l
