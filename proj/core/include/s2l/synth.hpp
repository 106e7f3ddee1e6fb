#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "s2l/ink.hpp"
#include "s2l/layout.hpp"
#include "s2l/primitive_store.hpp"
#include "s2l/rng.hpp"

namespace s2l {

struct SynthParams {
  std::size_t k = kDefaultCandidates;
  double coverage = 1.0;  // per-asset inclusion probability
  std::uint64_t seed = 0;
  bool include_groups = true;

  void validate() const;
};

// Affine map of the primitive's normalized strokes onto `target`. Timestamps
// are kept. Throws ValidationError for a zero-area target.
std::vector<Stroke> rescale_primitive(const Primitive& primitive, const BBox& target);

// Independent Bernoulli(p) per asset drawn from `rng`, in asset order.
std::vector<std::string> sample_coverage_mask(std::span<const Asset> assets, double coverage, Rng& rng);

// Random streams for one asset of one sample. Each depends only on
// (seed, sample id, asset name), so editing one asset leaves the others alone.
Rng coverage_stream(std::uint64_t seed, std::string_view sample_id, std::string_view asset_name);
Rng selection_stream(std::uint64_t seed, std::string_view sample_id, std::string_view asset_name);

// Coverage mask computed from the per-asset streams, as compose_sketch does.
std::vector<std::string> coverage_mask(std::span<const Asset> assets, double coverage, std::uint64_t seed,
                                       std::string_view sample_id = {});

// One primitive per covered asset, scaled into its box. Zero-area assets are
// skipped. Output is a pure function of the arguments.
Sketch compose_sketch(const Layout& layout, const PrimitiveStore& store, const SynthParams& params,
                      std::string_view sample_id = {});

struct LayoutRecord {
  std::string id;
  Layout layout;
};

struct SynthFailure {
  std::string id;
  std::string message;
};

struct SynthSummary {
  std::size_t input = 0;
  std::size_t written = 0;
  std::size_t skipped = 0;  // output already present
  std::size_t failed = 0;
  std::vector<SynthFailure> failures;  // sorted by id
};

// Output file for a sample id.
std::filesystem::path sketch_path(const std::filesystem::path& out_dir, std::string_view id);

// Writes <out_dir>/<id>.jsonl per layout. Existing outputs are left alone;
// per-layout errors are recorded and never stop the batch.
SynthSummary synth_dataset(std::span<const LayoutRecord> layouts, const PrimitiveStore& store,
                           const SynthParams& params, const std::filesystem::path& out_dir,
                           std::size_t jobs = 1);

}  // namespace s2l
