// Writes the bundled toy corpus: a COCO-style annotation file with its
// category map and font-size sidecar, plus a matching primitive pool.

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "s2l/fsutil.hpp"
#include "s2l/ink_io.hpp"
#include "s2l/toy_corpus.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

int main(int argc, char** argv) {
  CLI::App app{"Generate the toy layout corpus and primitive pool"};
  fs::path out;
  std::size_t layouts = 20, train = 237, validation = 236;
  std::uint64_t seed = 7;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--layouts", layouts, "Number of pages")->capture_default_str();
  app.add_option("--train", train, "Training primitives")->capture_default_str();
  app.add_option("--validation", validation, "Validation primitives")->capture_default_str();
  app.add_option("--seed", seed, "Generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(out);
    const auto corpus = s2l::toy::corpus(layouts, seed);

    const std::vector<std::pair<std::string, s2l::Kind>> categories{
        {"title", s2l::Kind::Text}, {"text", s2l::Kind::Text}, {"figure", s2l::Kind::Image}};
    std::map<std::string, int> category_id;
    json coco = {{"images", json::array()}, {"annotations", json::array()}, {"categories", json::array()}};
    json category_map = json::object();
    for (std::size_t i = 0; i < categories.size(); ++i) {
      const auto& [name, kind] = categories[i];
      category_id[name] = static_cast<int>(i) + 1;
      coco["categories"].push_back({{"id", i + 1}, {"name", name}});
      category_map[name] = {{"kind", s2l::to_string(kind)}, {"label", name}};
    }

    std::string sidecar;
    int annotation_id = 1;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto& [id, layout] = corpus[i];
      coco["images"].push_back({{"id", i + 1},
                                {"file_name", id + ".png"},
                                {"width", layout.canvas.width},
                                {"height", layout.canvas.height}});
      for (const auto& a : layout.assets) {
        coco["annotations"].push_back({{"id", annotation_id++},
                                       {"image_id", i + 1},
                                       {"category_id", category_id.at(a.label)},
                                       {"bbox", {a.bbox.xmin, a.bbox.ymin, a.bbox.width, a.bbox.height}}});
        if (a.font_size)
          sidecar += json{{"sample_id", id}, {"asset_name", a.name}, {"font_size", *a.font_size}}.dump() + "\n";
      }
    }
    s2l::write_file_atomic(out / "coco.json", coco.dump(1) + "\n");
    s2l::write_file_atomic(out / "categories.json", category_map.dump(2) + "\n");
    s2l::write_file_atomic(out / "sidecar.jsonl", sidecar);

    std::ofstream pool(out / "primitives.jsonl", std::ios::binary);
    s2l::write_primitives(pool, s2l::toy::primitive_pool(train, validation, seed));
    if (!pool) throw std::runtime_error("cannot write primitives.jsonl");
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "runtime"}, {"message", e.what()}}.dump() << std::endl;
    return 1;
  }
  return 0;
}
