#include "s2l/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "s2l/error.hpp"
#include "s2l/fsutil.hpp"
#include "s2l/rng.hpp"

namespace s2l {

namespace {

using nlohmann::json;

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const CategoryTarget* lookup(const CategoryMap& map, std::string_view name) {
  auto it = map.find(lower(name));
  return it == map.end() ? nullptr : &it->second;
}

CategoryMap normalize_keys(const CategoryMap& in) {
  CategoryMap out;
  for (const auto& [k, v] : in) out[lower(k)] = v;
  return out;
}

double number_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) throw ParseError(std::string("missing numeric field '") + key + "'");
  return it->get<double>();
}

BBox bbox_from(const json& j) {
  if (j.is_array()) {
    if (j.size() != 4 || !std::all_of(j.begin(), j.end(), [](const json& v) { return v.is_number(); }))
      throw ParseError("bbox array must hold four numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  }
  if (j.is_object())
    return {number_field(j, "xmin"), number_field(j, "ymin"), number_field(j, "width"), number_field(j, "height")};
  throw ParseError("bbox must be an array or an object");
}

std::string unique_id(std::string id, std::string_view suffix, std::set<std::string>& used) {
  if (used.insert(id).second) return id;
  std::string alt = id + "_" + std::string(suffix);
  for (int n = 1; !used.insert(alt).second; ++n) alt = id + "_" + std::string(suffix) + "_" + std::to_string(n);
  return alt;
}

void add_named(Layout& layout, Asset asset, std::map<std::string, std::size_t>& counters) {
  asset.name = asset.label + std::to_string(counters[asset.label]++);
  layout.assets.push_back(std::move(asset));
}

}  // namespace

CategoryMap publaynet_categories() {
  return {{"text", {Kind::Text, "text"}},
          {"title", {Kind::Text, "title"}},
          {"list", {Kind::Text, "list"}},
          {"table", {Kind::Image, "table"}},
          {"figure", {Kind::Image, "figure"}}};
}

CategoryMap doclaynet_categories() {
  return {{"caption", {Kind::Text, "caption"}},
          {"footnote", {Kind::Text, "footnote"}},
          {"formula", {Kind::Text, "formula"}},
          {"list-item", {Kind::Text, "list_item"}},
          {"page-footer", {Kind::Text, "page_footer"}},
          {"page-header", {Kind::Text, "page_header"}},
          {"picture", {Kind::Image, "picture"}},
          {"section-header", {Kind::Text, "section_header"}},
          {"table", {Kind::Image, "table"}},
          {"text", {Kind::Text, "text"}},
          {"title", {Kind::Text, "title"}}};
}

CategoryMap category_map_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("category map must be an object");
  CategoryMap out;
  for (const auto& [name, v] : j.items()) {
    if (!v.is_object() || !v.contains("kind") || !v["kind"].is_string())
      throw ParseError("category '" + name + "' needs a string 'kind'");
    auto kind = parse_kind(v["kind"].get<std::string>());
    if (!kind) throw ParseError("category '" + name + "' has unknown kind '" + v["kind"].get<std::string>() + "'");
    std::string label = v.contains("label") ? v["label"].get<std::string>() : lower(name);
    out[lower(name)] = {*kind, sanitize_id(label)};
  }
  return out;
}

IngestResult load_coco(const json& doc, const CategoryMap& categories_in) {
  if (!doc.is_object() || !doc.contains("images") || !doc.contains("annotations") || !doc.contains("categories"))
    throw ParseError("COCO file needs images, annotations and categories");
  const CategoryMap categories = normalize_keys(categories_in);

  std::unordered_map<std::int64_t, const CategoryTarget*> by_category;
  std::set<std::int64_t> unknown;
  for (const auto& c : doc["categories"]) {
    const auto id = c.at("id").get<std::int64_t>();
    const auto* target = c.contains("name") ? lookup(categories, c["name"].get<std::string>()) : nullptr;
    by_category[id] = target;
  }
  for (const auto& a : doc["annotations"]) {
    const auto id = a.at("category_id").get<std::int64_t>();
    auto it = by_category.find(id);
    if (it == by_category.end() || it->second == nullptr) unknown.insert(id);
  }
  if (!unknown.empty()) {
    std::string list;
    for (auto id : unknown) list += (list.empty() ? "" : ", ") + std::to_string(id);
    throw ValidationError("unknown category id(s): " + list);
  }

  IngestResult result;
  std::unordered_map<std::int64_t, std::size_t> slot;  // image id -> layout index
  std::set<std::string> used;
  for (const auto& img : doc["images"]) {
    const auto id = img.at("id").get<std::int64_t>();
    const double w = img.value("width", 0.0), h = img.value("height", 0.0);
    if (!(w > 0.0) || !(h > 0.0)) {
      spdlog::warn("image {} has no usable dimensions, skipped", id);
      ++result.stats.skipped_images;
      continue;
    }
    std::string base;
    if (img.contains("file_name") && img["file_name"].is_string())
      base = sanitize_id(std::filesystem::path(img["file_name"].get<std::string>()).stem().string());
    if (base.empty()) base = std::to_string(id);
    LayoutRecord rec{unique_id(base, std::to_string(id), used), Layout{{w, h}, {}}};
    slot[id] = result.layouts.size();
    result.layouts.push_back(std::move(rec));
  }
  result.stats.images = result.layouts.size();

  std::vector<std::map<std::string, std::size_t>> counters(result.layouts.size());
  for (const auto& a : doc["annotations"]) {
    const auto image_id = a.at("image_id").get<std::int64_t>();
    auto it = slot.find(image_id);
    if (it == slot.end()) {
      spdlog::warn("annotation for missing image {} skipped", image_id);
      ++result.stats.skipped_annotations;
      continue;
    }
    const auto* target = by_category.at(a.at("category_id").get<std::int64_t>());
    Asset asset;
    asset.kind = target->kind;
    asset.label = target->label;
    asset.bbox = bbox_from(a.at("bbox"));
    add_named(result.layouts[it->second].layout, std::move(asset), counters[it->second]);
    ++result.stats.annotations;
  }
  return result;
}

IngestResult load_coco(const std::filesystem::path& path, const CategoryMap& categories) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), e.byte);
  }
  return load_coco(doc, categories);
}

IngestResult load_slides(const std::filesystem::path& dir) {
  IngestResult result;
  std::set<std::string> used;
  for (const auto& file : list_files(dir, ".json")) {
    try {
      const json j = json::parse(read_file(file));
      const json& c = j.at("canvas");
      Layout layout{{number_field(c, "width"), number_field(c, "height")}, {}};
      validate(layout.canvas);

      Asset background;
      background.name = "background";
      background.kind = Kind::Image;
      background.label = "background";
      background.bbox = {0.0, 0.0, layout.canvas.width, layout.canvas.height};
      if (j.contains("background_ref")) background.image_ref = j["background_ref"].get<std::string>();
      layout.assets.push_back(std::move(background));

      std::map<std::string, std::size_t> counters;
      for (const auto& e : j.value("elements", json::array())) {
        Asset a;
        a.label = sanitize_id(e.at("label").get<std::string>());
        if (a.label.empty()) throw ParseError("empty element label");
        if (e.contains("text_content")) a.text_content = e["text_content"].get<std::string>();
        if (e.contains("image_ref")) a.image_ref = e["image_ref"].get<std::string>();
        if (e.contains("font_size")) a.font_size = e["font_size"].get<double>();
        if (e.contains("kind")) {
          auto k = parse_kind(e["kind"].get<std::string>());
          if (!k) throw ParseError("unknown kind '" + e["kind"].get<std::string>() + "'");
          a.kind = *k;
        } else {
          a.kind = infer_kind("", a.label, a.image_ref.has_value());
        }
        a.bbox = bbox_from(e.at("bbox"));
        add_named(layout, std::move(a), counters);
      }
      validate(layout);
      std::string base = j.contains("slide_id") ? sanitize_id(j["slide_id"].is_string()
                                                                  ? j["slide_id"].get<std::string>()
                                                                  : j["slide_id"].dump())
                                                : sanitize_id(file.stem().string());
      if (base.empty()) base = sanitize_id(file.stem().string());
      result.layouts.push_back({unique_id(base, sanitize_id(file.stem().string()), used), std::move(layout)});
    } catch (const std::exception& e) {
      spdlog::warn("{}: malformed slide record skipped: {}", file.string(), e.what());
      ++result.stats.skipped_records;
    }
  }
  result.stats.images = result.layouts.size();
  for (const auto& r : result.layouts) result.stats.annotations += r.layout.assets.size();
  return result;
}

std::size_t apply_sidecar(std::vector<LayoutRecord>& layouts, std::istream& sidecar) {
  std::unordered_map<std::string, Layout*> by_id;
  for (auto& r : layouts) by_id[r.id] = &r.layout;
  std::size_t applied = 0, line_no = 0;
  std::string line;
  while (std::getline(sidecar, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      auto it = by_id.find(j.at("sample_id").get<std::string>());
      const auto name = j.at("asset_name").get<std::string>();
      Asset* asset = nullptr;
      if (it != by_id.end())
        for (auto& a : it->second->assets)
          if (a.name == name) asset = &a;
      if (!asset) {
        spdlog::warn("sidecar line {}: no asset '{}' in sample '{}'", line_no, name,
                     j["sample_id"].get<std::string>());
        continue;
      }
      if (asset->kind != Kind::Text) {
        spdlog::warn("sidecar line {}: '{}' is not a text asset", line_no, name);
        continue;
      }
      if (j.contains("text_content") && !j["text_content"].is_null())
        asset->text_content = j["text_content"].get<std::string>();
      if (j.contains("font_size") && !j["font_size"].is_null()) asset->font_size = j["font_size"].get<double>();
      ++applied;
    } catch (const json::exception& e) {
      spdlog::warn("sidecar line {} skipped: {}", line_no, e.what());
    }
  }
  return applied;
}

DatasetManifest make_manifest(std::string dataset, std::string split, std::vector<std::string> ids,
                              std::optional<std::uint64_t> seed) {
  if (split != "train" && split != "validation" && split != "test")
    throw ValidationError("split must be train, validation or test, got '" + split + "'");
  std::sort(ids.begin(), ids.end());
  if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end())
    throw ValidationError("duplicate id '" + *dup + "' in manifest");
  return {std::move(dataset), std::move(split), seed, std::move(ids)};
}

void write_manifest(std::ostream& out, const DatasetManifest& m) {
  json header = {{"dataset", m.dataset}, {"split", m.split}, {"count", m.count()}};
  header["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  out << header.dump() << '\n';
  for (const auto& id : m.ids) out << json{{"id", id}}.dump() << '\n';
}

DatasetManifest read_manifest(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty manifest");
  DatasetManifest m;
  std::size_t expected = 0;
  try {
    const json h = json::parse(line);
    m.dataset = h.at("dataset").get<std::string>();
    m.split = h.at("split").get<std::string>();
    expected = h.at("count").get<std::size_t>();
    if (h.contains("seed") && !h["seed"].is_null()) m.seed = h["seed"].get<std::uint64_t>();
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      m.ids.push_back(json::parse(line).at("id").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  if (m.ids.size() != expected)
    throw ValidationError("manifest header says " + std::to_string(expected) + " ids, found " +
                          std::to_string(m.ids.size()));
  return make_manifest(std::move(m.dataset), std::move(m.split), std::move(m.ids), m.seed);
}

std::vector<std::string> subsample_ids(std::vector<std::string> ids, std::size_t n, std::uint64_t seed) {
  std::sort(ids.begin(), ids.end());
  if (n < ids.size()) {
    Rng rng(derive_seed(seed, {"subsample"}));
    for (std::size_t i = 0; i < n; ++i) std::swap(ids[i], ids[i + rng.uniform_index(ids.size() - i)]);
    ids.resize(n);
    std::sort(ids.begin(), ids.end());
  }
  return ids;
}

std::string sanitize_id(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    const auto u = static_cast<unsigned char>(c);
    out.push_back(std::isalnum(u) || c == '-' || c == '_' || c == '.' ? c : '_');
  }
  while (!out.empty() && out.front() == '.') out.erase(out.begin());
  return out;
}

}  // namespace s2l
