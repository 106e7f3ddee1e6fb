#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "s2l/error.hpp"
#include "s2l/fsutil.hpp"
#include "s2l/ingest.hpp"
#include "temp_dir.hpp"

namespace s2l {
namespace {

using nlohmann::json;

json minimal_coco() {
  return json::parse(R"({
    "images": [{"id": 1, "file_name": "a/page-1.png", "width": 600, "height": 800},
               {"id": 2, "file_name": "page-2.png", "width": 600, "height": 800},
               {"id": 3, "file_name": "broken.png"}],
    "categories": [{"id": 1, "name": "text"}, {"id": 4, "name": "Figure"}, {"id": 5, "name": "title"}],
    "annotations": [
      {"image_id": 1, "category_id": 1, "bbox": [10, 20, 300, 40]},
      {"image_id": 1, "category_id": 4, "bbox": [10, 100, 300, 200]},
      {"image_id": 1, "category_id": 1, "bbox": [10, 320, 300, 40.5]},
      {"image_id": 2, "category_id": 5, "bbox": [0, 0, 600, 60]},
      {"image_id": 9, "category_id": 1, "bbox": [0, 0, 1, 1]}
    ]})");
}

TEST(Coco, MinimalFile) {
  const auto r = load_coco(minimal_coco(), publaynet_categories());
  ASSERT_EQ(r.layouts.size(), 2u);
  EXPECT_EQ(r.stats.images, 2u);
  EXPECT_EQ(r.stats.skipped_images, 1u);
  EXPECT_EQ(r.stats.annotations, 4u);
  EXPECT_EQ(r.stats.skipped_annotations, 1u);

  const auto& first = r.layouts[0];
  EXPECT_EQ(first.id, "page-1");
  EXPECT_EQ(first.layout.canvas, (Canvas{600, 800}));
  ASSERT_EQ(first.layout.assets.size(), 3u);
  EXPECT_EQ(first.layout.assets[0].kind, Kind::Text);
  EXPECT_EQ(first.layout.assets[1].kind, Kind::Image);
  EXPECT_EQ(first.layout.assets[2].bbox, (BBox{10, 320, 300, 40.5}));
  std::set<std::string> names;
  for (const auto& a : first.layout.assets) names.insert(a.name);
  EXPECT_EQ(names.size(), 3u);
  EXPECT_NO_THROW(validate(first.layout));
}

TEST(Coco, UnknownCategoryIsListed) {
  auto doc = minimal_coco();
  doc["categories"].push_back({{"id", 7}, {"name", "sticker"}});
  doc["annotations"].push_back({{"image_id", 1}, {"category_id", 7}, {"bbox", {0, 0, 1, 1}}});
  doc["annotations"].push_back({{"image_id", 1}, {"category_id", 8}, {"bbox", {0, 0, 1, 1}}});
  try {
    load_coco(doc, publaynet_categories());
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("7, 8"), std::string::npos) << e.what();
  }
}

TEST(Coco, DuplicateStemsGetDistinctIds) {
  auto doc = minimal_coco();
  doc["images"][1]["file_name"] = "x/page-1.png";
  const auto r = load_coco(doc, publaynet_categories());
  ASSERT_EQ(r.layouts.size(), 2u);
  EXPECT_NE(r.layouts[0].id, r.layouts[1].id);
}

TEST(Coco, CustomCategoryMap) {
  const auto map = category_map_from_json(json::parse(R"({"text": {"kind": "text", "label": "body"},
      "figure": {"kind": "image", "label": "pic"}, "title": {"kind": "text"}})"));
  const auto r = load_coco(minimal_coco(), map);
  EXPECT_EQ(r.layouts[0].layout.assets[1].label, "pic");
  EXPECT_THROW(category_map_from_json(json::parse(R"({"x": {"kind": "video"}})")), ParseError);
}

TEST(Coco, DocLayNetMapCoversLabels) {
  const auto map = doclaynet_categories();
  for (const char* name : {"caption", "footnote", "formula", "list-item", "page-footer", "page-header", "picture",
                           "section-header", "table", "text", "title"})
    EXPECT_TRUE(map.contains(name)) << name;
  EXPECT_EQ(map.at("picture").kind, Kind::Image);
  EXPECT_EQ(map.at("table").kind, Kind::Image);
}

TEST(Slides, BackgroundFirstAndMalformedSkipped) {
  test::TempDir dir;
  write_file_atomic(dir.path() / "b.json", R"({"canvas": {"width": 1280, "height": 720}})");
  write_file_atomic(dir.path() / "a.json", R"({"canvas": {"width": 1280, "height": 720}, "background_ref": "bg.png",
      "elements": [{"label": "heading", "bbox": [10, 10, 400, 80], "text_content": "Hi"},
                   {"label": "photo", "kind": "image", "bbox": {"xmin": 500, "ymin": 100, "width": 300, "height": 200}}]})");
  write_file_atomic(dir.path() / "c.json", R"({"canvas": {"width": 0, "height": 720}})");
  write_file_atomic(dir.path() / "d.json", "{not json");
  const auto r = load_slides(dir.path());
  ASSERT_EQ(r.layouts.size(), 2u);
  EXPECT_EQ(r.stats.skipped_records, 2u);
  EXPECT_EQ(r.layouts[0].id, "a");
  const auto& a = r.layouts[0].layout.assets;
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0].name, "background");
  EXPECT_EQ(a[0].image_ref, "bg.png");
  EXPECT_EQ(a[0].bbox, (BBox{0, 0, 1280, 720}));
  EXPECT_EQ(a[1].kind, Kind::Text);
  EXPECT_EQ(a[2].kind, Kind::Image);
  EXPECT_EQ(a[2].bbox, (BBox{500, 100, 300, 200}));
  ASSERT_EQ(r.layouts[1].layout.assets.size(), 1u);
}

TEST(Sidecar, MergesTextFieldsOnly) {
  auto r = load_coco(minimal_coco(), publaynet_categories());
  const auto text_name = r.layouts[0].layout.assets[0].name;
  const auto image_name = r.layouts[0].layout.assets[1].name;
  std::istringstream in(json{{"sample_id", "page-1"}, {"asset_name", text_name}, {"font_size", 14.5},
                             {"text_content", "hello"}}
                            .dump() +
                        "\n\n" + json{{"sample_id", "page-1"}, {"asset_name", image_name}, {"font_size", 3}}.dump() +
                        "\n" + json{{"sample_id", "nope"}, {"asset_name", text_name}}.dump() + "\nnot json\n");
  EXPECT_EQ(apply_sidecar(r.layouts, in), 1u);
  EXPECT_EQ(r.layouts[0].layout.assets[0].font_size, 14.5);
  EXPECT_EQ(r.layouts[0].layout.assets[0].text_content, "hello");
  EXPECT_FALSE(r.layouts[0].layout.assets[1].font_size);
}

TEST(Manifest, SortedDeterministicAndCounted) {
  const auto m = make_manifest("toy", "test", {"c", "a", "b"}, 5);
  EXPECT_EQ(m.ids, (std::vector<std::string>{"a", "b", "c"}));
  std::ostringstream a, b;
  write_manifest(a, m);
  write_manifest(b, make_manifest("toy", "test", {"b", "c", "a"}, 5));
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  const auto back = read_manifest(in);
  EXPECT_EQ(back.ids, m.ids);
  EXPECT_EQ(back.seed, 5u);
  EXPECT_EQ(back.count(), 3u);

  std::string truncated = a.str();
  truncated.erase(truncated.rfind('{'));
  std::istringstream bad(truncated);
  EXPECT_THROW(read_manifest(bad), ValidationError);
  EXPECT_THROW(make_manifest("toy", "dev", {"a"}), ValidationError);
  EXPECT_THROW(make_manifest("toy", "train", {"a", "a"}), ValidationError);
}

TEST(Subsample, DeterministicSortedSubset) {
  std::vector<std::string> ids;
  for (int i = 0; i < 500; ++i) ids.push_back("id" + std::to_string(i));
  const auto a = subsample_ids(ids, 50, 9);
  EXPECT_EQ(a, subsample_ids(ids, 50, 9));
  EXPECT_NE(a, subsample_ids(ids, 50, 10));
  EXPECT_EQ(a.size(), 50u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(std::set<std::string>(a.begin(), a.end()).size(), 50u);
  for (const auto& id : a) EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end());
  EXPECT_EQ(subsample_ids(ids, 1000, 1).size(), 500u);
}

TEST(SanitizeId, ReplacesAwkwardCharacters) {
  EXPECT_EQ(sanitize_id("a/b c"), "a_b_c");
  EXPECT_EQ(sanitize_id("..hidden"), "hidden");
  EXPECT_EQ(sanitize_id("ok-1_2.x"), "ok-1_2.x");
}

}  // namespace
}  // namespace s2l
