#include "s2l/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "s2l/error.hpp"
#include "s2l/ink_io.hpp"

namespace s2l {

void SynthParams::validate() const {
  if (k < 1) throw ValidationError("k must be at least 1");
  if (!(coverage >= 0.0 && coverage <= 1.0)) throw ValidationError(fmt::format("coverage {} outside [0, 1]", coverage));
}

std::vector<Stroke> rescale_primitive(const Primitive& primitive, const BBox& target) {
  validate(target);
  if (!(target.area() > 0.0)) throw ValidationError("cannot rescale a primitive into a zero-area box");
  std::vector<Stroke> out;
  out.reserve(primitive.strokes.size());
  for (const auto& s : primitive.strokes) {
    Stroke r;
    r.points.reserve(s.points.size());
    for (const auto& p : s.points)
      r.points.push_back({target.xmin + p.x * target.width, target.ymin + p.y * target.height, p.t});
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> sample_coverage_mask(std::span<const Asset> assets, double coverage, Rng& rng) {
  std::vector<std::string> out;
  for (const auto& a : assets)
    if (rng.bernoulli(coverage)) out.push_back(a.name);
  return out;
}

Rng coverage_stream(std::uint64_t seed, std::string_view sample_id, std::string_view asset_name) {
  return Rng(derive_seed(seed, {"coverage", sample_id, asset_name}));
}

Rng selection_stream(std::uint64_t seed, std::string_view sample_id, std::string_view asset_name) {
  return Rng(derive_seed(seed, {"select", sample_id, asset_name}));
}

std::vector<std::string> coverage_mask(std::span<const Asset> assets, double coverage, std::uint64_t seed,
                                       std::string_view sample_id) {
  std::vector<std::string> out;
  for (const auto& a : assets) {
    Rng rng = coverage_stream(seed, sample_id, a.name);
    if (rng.bernoulli(coverage)) out.push_back(a.name);
  }
  return out;
}

Sketch compose_sketch(const Layout& layout, const PrimitiveStore& store, const SynthParams& params,
                      std::string_view sample_id) {
  params.validate();
  Sketch sketch;
  sketch.canvas = layout.canvas;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (const auto& asset : layout.assets) {
    if (!(asset.bbox.area() > 0.0)) {
      spdlog::warn("{}: skipping zero-area asset '{}'", sample_id.empty() ? "sketch" : sample_id, asset.name);
      continue;
    }
    Rng cover = coverage_stream(params.seed, sample_id, asset.name);
    if (!cover.bernoulli(params.coverage)) continue;
    Rng select = selection_stream(params.seed, sample_id, asset.name);
    const Primitive& primitive = store.select_primitive(asset, params.k, select);
    auto strokes = rescale_primitive(primitive, asset.bbox);
    auto& indices = groups[asset.name];
    for (auto& s : strokes) {
      indices.push_back(sketch.strokes.size());
      sketch.strokes.push_back(std::move(s));
    }
  }
  if (params.include_groups) sketch.groups = std::move(groups);
  return sketch;
}

std::filesystem::path sketch_path(const std::filesystem::path& out_dir, std::string_view id) {
  return out_dir / (std::string(id) + ".jsonl");
}

SynthSummary synth_dataset(std::span<const LayoutRecord> layouts, const PrimitiveStore& store,
                           const SynthParams& params, const std::filesystem::path& out_dir, std::size_t jobs) {
  params.validate();
  std::filesystem::create_directories(out_dir);

  SynthSummary summary;
  summary.input = layouts.size();
  std::mutex mu;
  auto fail = [&](const std::string& id, std::string message) {
    std::lock_guard lock(mu);
    ++summary.failed;
    summary.failures.push_back({id, std::move(message)});
  };

  // A repeated id would make two workers race for one output file.
  std::set<std::string_view> seen;
  std::vector<bool> duplicate(layouts.size(), false);
  for (std::size_t i = 0; i < layouts.size(); ++i) duplicate[i] = !seen.insert(layouts[i].id).second;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < layouts.size(); i = next++) {
      const auto& rec = layouts[i];
      try {
        if (rec.id.empty() || rec.id.find('/') != std::string::npos || rec.id == "." || rec.id == "..")
          throw ValidationError(fmt::format("unusable sample id '{}'", rec.id));
        if (duplicate[i]) throw ValidationError(fmt::format("duplicate sample id '{}'", rec.id));
        const auto path = sketch_path(out_dir, rec.id);
        if (std::filesystem::exists(path)) {
          std::lock_guard lock(mu);
          ++summary.skipped;
          continue;
        }
        save_sketch(path, compose_sketch(rec.layout, store, params, rec.id));
        std::lock_guard lock(mu);
        ++summary.written;
      } catch (const std::exception& e) {
        fail(rec.id, e.what());
      }
    }
  };

  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, layouts.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  std::sort(summary.failures.begin(), summary.failures.end(),
            [](const SynthFailure& a, const SynthFailure& b) { return a.id < b.id; });
  return summary;
}

}  // namespace s2l
