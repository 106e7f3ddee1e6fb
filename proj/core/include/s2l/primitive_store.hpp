#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "s2l/ink.hpp"
#include "s2l/kdtree.hpp"
#include "s2l/layout.hpp"
#include "s2l/rng.hpp"

namespace s2l {

inline constexpr std::size_t kDefaultCandidates = 10;

// Image: (width, aspect). Text: (width, height, font_size).
constexpr std::size_t feature_dim(Kind kind) { return kind == Kind::Image ? 2 : 3; }

struct FeatureVector {
  Kind kind = Kind::Text;
  FeaturePoint values{};

  std::size_t dim() const { return feature_dim(kind); }
  std::span<const double> view() const { return {values.data(), dim()}; }
};

struct KindStats {
  FeaturePoint mean{};
  FeaturePoint stddev{1.0, 1.0, 1.0};
};

struct StandardizationStats {
  KindStats text;
  KindStats image;

  const KindStats& of(Kind kind) const { return kind == Kind::Image ? image : text; }
};

// Raw (unstandardized) features.
FeatureVector raw_features(const Primitive& primitive);
// Text assets without a font size use their box height instead.
FeatureVector raw_features(const Asset& asset);

FeatureVector standardize(const FeatureVector& raw, const StandardizationStats& stats);
// Throws ValidationError when a raw attribute is not finite.
FeatureVector featurize_asset(const Asset& asset, const StandardizationStats& stats);

// Population statistics; zero spread falls back to 1.
KindStats compute_stats(std::span<const FeatureVector> raw);

struct StoreOptions {
  // Kinds that must have at least one primitive.
  std::vector<Kind> required_kinds = {Kind::Text, Kind::Image};
};

// Immutable primitive pool with one k-d tree per kind over standardized
// features. Primitives are held sorted by id, so build order does not matter.
class PrimitiveStore {
 public:
  static PrimitiveStore build(std::vector<Primitive> primitives, const StoreOptions& options = {});

  std::size_t size() const { return primitives_.size(); }
  std::size_t count(Kind kind) const { return by_kind(kind).members.size(); }
  const StandardizationStats& stats() const { return stats_; }
  const std::vector<Primitive>& primitives() const { return primitives_; }
  const Primitive& get(const std::string& id) const;

  // Up to k ids of the asset's kind, nearest first; equal distances resolve
  // by id. Fewer than k available returns all of them.
  std::vector<std::string> query_candidates(const Asset& asset, std::size_t k) const;
  // Same result from an exhaustive scan.
  std::vector<std::string> query_candidates_linear(const Asset& asset, std::size_t k) const;

  // Uniform draw among the k nearest.
  const Primitive& select_primitive(const Asset& asset, std::size_t k, Rng& rng) const;

 private:
  struct KindIndex {
    std::vector<std::size_t> members;  // indices into primitives_, ascending id
    KdTree tree;
  };

  const KindIndex& by_kind(Kind kind) const { return kind == Kind::Image ? image_ : text_; }
  std::vector<std::string> to_ids(const KindIndex& index, const std::vector<Neighbor>& hits) const;
  const KindIndex& checked_index(const Asset& asset) const;

  std::vector<Primitive> primitives_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  StandardizationStats stats_;
  KindIndex text_;
  KindIndex image_;
};

}  // namespace s2l
