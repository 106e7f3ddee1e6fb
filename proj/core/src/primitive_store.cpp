#include "s2l/primitive_store.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "s2l/error.hpp"

namespace s2l {

FeatureVector raw_features(const Primitive& p) {
  FeatureVector f{p.kind, {}};
  if (p.kind == Kind::Image) {
    f.values = {p.source_width, p.source_aspect, 0.0};
  } else {
    f.values = {p.source_width, p.source_height, p.source_font_size.value_or(p.source_height)};
  }
  return f;
}

FeatureVector raw_features(const Asset& a) {
  FeatureVector f{a.kind, {}};
  if (a.kind == Kind::Image) {
    f.values = {a.bbox.width, a.bbox.width / a.bbox.height, 0.0};
  } else {
    f.values = {a.bbox.width, a.bbox.height, a.font_size.value_or(a.bbox.height)};
  }
  return f;
}

FeatureVector standardize(const FeatureVector& raw, const StandardizationStats& stats) {
  const KindStats& s = stats.of(raw.kind);
  FeatureVector out{raw.kind, {}};
  for (std::size_t d = 0; d < raw.dim(); ++d) out.values[d] = (raw.values[d] - s.mean[d]) / s.stddev[d];
  return out;
}

FeatureVector featurize_asset(const Asset& asset, const StandardizationStats& stats) {
  const FeatureVector raw = raw_features(asset);
  for (double v : raw.view())
    if (!std::isfinite(v)) throw ValidationError(fmt::format("asset '{}' has a non-finite feature", asset.name));
  return standardize(raw, stats);
}

KindStats compute_stats(std::span<const FeatureVector> raw) {
  KindStats s;
  if (raw.empty()) return s;
  const std::size_t dim = raw.front().dim();
  const double n = static_cast<double>(raw.size());
  for (std::size_t d = 0; d < dim; ++d) {
    double sum = 0.0;
    for (const auto& f : raw) sum += f.values[d];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& f : raw) ss += (f.values[d] - mean) * (f.values[d] - mean);
    const double sd = std::sqrt(ss / n);
    s.mean[d] = mean;
    s.stddev[d] = sd > 0.0 && std::isfinite(sd) ? sd : 1.0;
  }
  return s;
}

PrimitiveStore PrimitiveStore::build(std::vector<Primitive> primitives, const StoreOptions& options) {
  PrimitiveStore store;
  std::sort(primitives.begin(), primitives.end(), [](const Primitive& a, const Primitive& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    validate(primitives[i]);
    if (i > 0 && primitives[i].id == primitives[i - 1].id)
      throw ValidationError(fmt::format("duplicate primitive id '{}'", primitives[i].id));
  }
  store.primitives_ = std::move(primitives);

  for (Kind kind : {Kind::Text, Kind::Image}) {
    KindIndex& index = kind == Kind::Image ? store.image_ : store.text_;
    std::vector<FeatureVector> raw;
    for (std::size_t i = 0; i < store.primitives_.size(); ++i) {
      if (store.primitives_[i].kind != kind) continue;
      index.members.push_back(i);
      raw.push_back(raw_features(store.primitives_[i]));
    }
    const bool required =
        std::find(options.required_kinds.begin(), options.required_kinds.end(), kind) != options.required_kinds.end();
    if (raw.empty() && required)
      throw ValidationError(fmt::format("primitive pool has no {} primitives", to_string(kind)));
    KindStats& ks = kind == Kind::Image ? store.stats_.image : store.stats_.text;
    ks = compute_stats(raw);
    std::vector<FeaturePoint> points;
    points.reserve(raw.size());
    for (const auto& f : raw) points.push_back(standardize(f, store.stats_).values);
    index.tree = KdTree(std::move(points), feature_dim(kind));
  }
  for (std::size_t i = 0; i < store.primitives_.size(); ++i) store.by_id_.emplace(store.primitives_[i].id, i);
  return store;
}

const Primitive& PrimitiveStore::get(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw Error(fmt::format("unknown primitive '{}'", id));
  return primitives_[it->second];
}

const PrimitiveStore::KindIndex& PrimitiveStore::checked_index(const Asset& asset) const {
  const KindIndex& index = by_kind(asset.kind);
  if (index.members.empty())
    throw Error(fmt::format("no {} primitives available for asset '{}'", to_string(asset.kind), asset.name));
  return index;
}

std::vector<std::string> PrimitiveStore::to_ids(const KindIndex& index, const std::vector<Neighbor>& hits) const {
  std::vector<std::string> ids;
  ids.reserve(hits.size());
  for (const auto& h : hits) ids.push_back(primitives_[index.members[h.index]].id);
  return ids;
}

std::vector<std::string> PrimitiveStore::query_candidates(const Asset& asset, std::size_t k) const {
  if (k == 0) throw ValidationError("candidate count k must be at least 1");
  const KindIndex& index = checked_index(asset);
  if (index.members.size() < k)
    spdlog::warn("only {} {} primitives for k = {}; using all of them", index.members.size(), to_string(asset.kind), k);
  // Members are in ascending id order, so the tree's index tie-break is the id tie-break.
  return to_ids(index, index.tree.nearest(featurize_asset(asset, stats_).values, k));
}

std::vector<std::string> PrimitiveStore::query_candidates_linear(const Asset& asset, std::size_t k) const {
  if (k == 0) throw ValidationError("candidate count k must be at least 1");
  const KindIndex& index = checked_index(asset);
  return to_ids(index, index.tree.nearest_linear(featurize_asset(asset, stats_).values, k));
}

const Primitive& PrimitiveStore::select_primitive(const Asset& asset, std::size_t k, Rng& rng) const {
  const auto candidates = query_candidates(asset, k);
  return get(candidates[rng.uniform_index(candidates.size())]);
}

}  // namespace s2l
