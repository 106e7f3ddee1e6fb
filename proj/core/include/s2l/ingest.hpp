#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "s2l/layout.hpp"
#include "s2l/synth.hpp"

namespace s2l {

struct CategoryTarget {
  Kind kind = Kind::Text;
  std::string label;
};

// Dataset category name (case-insensitive) -> kind and label.
using CategoryMap = std::map<std::string, CategoryTarget>;

CategoryMap publaynet_categories();
CategoryMap doclaynet_categories();
// {"<category name>": {"kind": "text"|"image", "label": "..."}}
CategoryMap category_map_from_json(const nlohmann::json& j);

struct IngestStats {
  std::size_t images = 0;
  std::size_t annotations = 0;
  std::size_t skipped_annotations = 0;  // pointed at a missing image
  std::size_t skipped_images = 0;       // no usable dimensions
  std::size_t skipped_records = 0;      // malformed slide records
};

struct IngestResult {
  std::vector<LayoutRecord> layouts;
  IngestStats stats;
};

// COCO-style file (images / annotations / categories). One layout per image,
// in file order; assets are named <label><running index per label>.
// Throws ValidationError listing category ids the map cannot resolve.
IngestResult load_coco(const nlohmann::json& doc, const CategoryMap& categories);
IngestResult load_coco(const std::filesystem::path& path, const CategoryMap& categories);

// One JSON file per slide, processed in file-name order:
//   {"slide_id"?, "canvas": {"width", "height"}, "background_ref"?,
//    "elements": [{"label", "kind"?, "bbox": {...} | [x, y, w, h],
//                  "text_content"?, "image_ref"?, "font_size"?}]}
// Every layout starts with a full-canvas Image asset named "background".
IngestResult load_slides(const std::filesystem::path& dir);

// Sidecar line-records {"sample_id", "asset_name", "text_content"?, "font_size"?}
// merged into matching assets. Returns the number of records applied.
std::size_t apply_sidecar(std::vector<LayoutRecord>& layouts, std::istream& sidecar);

struct DatasetManifest {
  std::string dataset;
  std::string split;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> ids;  // sorted

  std::size_t count() const { return ids.size(); }
};

DatasetManifest make_manifest(std::string dataset, std::string split, std::vector<std::string> ids,
                              std::optional<std::uint64_t> seed = std::nullopt);
void write_manifest(std::ostream& out, const DatasetManifest& manifest);
DatasetManifest read_manifest(std::istream& in);

// Deterministic sample of n ids (all of them when n >= size), sorted.
std::vector<std::string> subsample_ids(std::vector<std::string> ids, std::size_t n, std::uint64_t seed);

// Replace path separators and other awkward characters in ids.
std::string sanitize_id(std::string_view raw);

}  // namespace s2l
