// s2l: ingest, synth, render, parse, eval and serve from one executable.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <set>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "s2l/annotation/http_server.hpp"
#include "s2l/annotation/service.hpp"
#include "s2l/error.hpp"
#include "s2l/fsutil.hpp"
#include "s2l/ingest.hpp"
#include "s2l/ink_io.hpp"
#include "s2l/ink_render.hpp"
#include "s2l/layout_io.hpp"
#include "s2l/primitive_store.hpp"
#include "s2l/render.hpp"
#include "s2l/report.hpp"
#include "s2l/sketch_parser.hpp"
#include "s2l/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Bad arguments or unusable paths, detected before any work starts.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void print_error(std::string_view kind, std::string_view message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << std::endl;
}

void require_file(const fs::path& p, std::string_view flag) {
  if (!fs::is_regular_file(p)) throw UsageError(fmt::format("{}: '{}' is not a readable file", flag, p.string()));
}

void require_dir(const fs::path& p, std::string_view flag) {
  if (!fs::is_directory(p)) throw UsageError(fmt::format("{}: '{}' is not a directory", flag, p.string()));
}

std::size_t resolve_jobs(std::size_t flag) {
  if (const char* env = std::getenv("S2L_JOBS"); env && *env) {
    try {
      const auto n = std::stoul(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw UsageError(fmt::format("S2L_JOBS must be a positive integer, got '{}'", env));
  }
  if (flag > 0) return flag;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Layout files (.json, .textproto) directly under `dir`, keyed by file stem.
std::vector<s2l::LayoutRecord> read_layout_dir(const fs::path& dir) {
  std::vector<fs::path> files = s2l::list_files(dir, ".json");
  for (auto& f : s2l::list_files(dir, ".textproto")) files.push_back(std::move(f));
  std::sort(files.begin(), files.end());
  std::set<std::string> seen;
  std::vector<s2l::LayoutRecord> out;
  for (const auto& f : files) {
    const std::string id = f.stem().string();
    if (!seen.insert(id).second) throw s2l::ValidationError("two layout files share the id '" + id + "'");
    try {
      s2l::Layout layout = s2l::parse_layout_auto(s2l::read_file(f));
      s2l::validate(layout);
      out.push_back({id, std::move(layout)});
    } catch (const s2l::Error& e) {
      throw s2l::Error(f.string() + ": " + e.what());
    }
  }
  return out;
}

s2l::Layout read_layout(const fs::path& path) {
  s2l::Layout layout = s2l::parse_layout_auto(s2l::read_file(path));
  s2l::validate(layout);
  return layout;
}

// The parser sees what a prompt would carry, never the answer's geometry.
std::vector<s2l::Asset> asset_descriptions(const s2l::Layout& layout) {
  std::vector<s2l::Asset> out = layout.assets;
  for (auto& a : out) a.bbox = {};
  return out;
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  std::string dataset;
  fs::path input, out, categories, sidecar;
  std::string split = "train";
  std::size_t subsample = 0;
  std::uint64_t seed = 0;
};

int cmd_ingest(const IngestArgs& a, bool seed_given) {
  if (a.dataset == "slides") {
    require_dir(a.input, "--input");
  } else {
    require_file(a.input, "--input");
  }
  if (a.dataset == "coco" && a.categories.empty()) throw UsageError("--dataset coco needs --categories");
  if (!a.categories.empty()) require_file(a.categories, "--categories");
  if (!a.sidecar.empty()) require_file(a.sidecar, "--sidecar");

  s2l::IngestResult result;
  if (a.dataset == "slides") {
    result = s2l::load_slides(a.input);
  } else {
    s2l::CategoryMap map;
    if (!a.categories.empty())
      map = s2l::category_map_from_json(json::parse(s2l::read_file(a.categories)));
    else
      map = a.dataset == "publaynet" ? s2l::publaynet_categories() : s2l::doclaynet_categories();
    result = s2l::load_coco(a.input, map);
  }
  if (!a.sidecar.empty()) {
    std::ifstream in(a.sidecar);
    spdlog::info("sidecar: {} records applied", s2l::apply_sidecar(result.layouts, in));
  }

  std::vector<std::string> ids;
  std::map<std::string, const s2l::Layout*> by_id;
  for (const auto& r : result.layouts) {
    try {
      s2l::validate(r.layout);
    } catch (const s2l::ValidationError& e) {
      spdlog::warn("layout '{}' skipped: {}", r.id, e.what());
      continue;
    }
    ids.push_back(r.id);
    by_id[r.id] = &r.layout;
  }
  std::optional<std::uint64_t> seed;
  if (a.subsample > 0) {
    ids = s2l::subsample_ids(std::move(ids), a.subsample, a.seed);
    seed = a.seed;
  } else if (seed_given) {
    seed = a.seed;
  }
  const auto manifest = s2l::make_manifest(a.dataset, a.split, ids, seed);

  fs::create_directories(a.out);
  for (const auto& id : manifest.ids)
    s2l::write_file_atomic(a.out / (id + ".json"), s2l::serialize_layout(*by_id.at(id), s2l::LayoutFormat::Canonical));
  std::ostringstream ms;
  s2l::write_manifest(ms, manifest);
  s2l::write_file_atomic(a.out / "manifest.jsonl", ms.str());
  spdlog::info("ingest: {} images, {} annotations, {} layouts written ({} images, {} annotations, {} records skipped)",
               result.stats.images, result.stats.annotations, manifest.count(), result.stats.skipped_images,
               result.stats.skipped_annotations, result.stats.skipped_records);
  return 0;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  fs::path dataset, primitives, out;
  s2l::SynthParams params;
  std::string primitive_split = "all";
  std::size_t jobs = 0;
};

int cmd_synth(const SynthArgs& a) {
  require_dir(a.dataset, "--dataset");
  require_file(a.primitives, "--primitives");
  a.params.validate();
  const std::size_t jobs = resolve_jobs(a.jobs);

  auto pool = s2l::load_primitives(a.primitives);
  if (a.primitive_split != "all") {
    const auto split = s2l::parse_split(a.primitive_split);
    std::erase_if(pool, [&](const s2l::Primitive& p) { return p.split != *split; });
  }
  const auto store = s2l::PrimitiveStore::build(std::move(pool));
  const auto layouts = read_layout_dir(a.dataset);
  const auto summary = s2l::synth_dataset(layouts, store, a.params, a.out, jobs);
  spdlog::info("synth: {} layouts, {} written, {} already present, {} failed", summary.input, summary.written,
               summary.skipped, summary.failed);
  for (const auto& f : summary.failures) spdlog::error("synth {}: {}", f.id, f.message);
  return summary.failed == 0 ? 0 : 1;
}

// ---------------------------------------------------------------- render

struct RenderArgs {
  fs::path input, out;
  std::string format = "svg";
  double stroke_width = 2.0;
  int width = 512;
};

int cmd_render(const RenderArgs& a) {
  require_file(a.input, "--input");
  const bool is_sketch = a.input.extension() == ".jsonl";
  if (!is_sketch && a.format == "pgm") throw UsageError("--format pgm renders sketches (.jsonl) only");
  std::string bytes;
  if (is_sketch) {
    const auto sketch = s2l::load_sketch(a.input);
    if (a.format == "pgm") {
      const int w = static_cast<int>(std::lround(a.stroke_width));
      bytes = s2l::encode_pgm(s2l::rasterize_sketch(sketch, a.width, std::max(1, w)));
    } else {
      bytes = s2l::render_sketch_svg(sketch, a.stroke_width);
    }
  } else {
    bytes = s2l::render_layout_svg(read_layout(a.input));
  }
  if (a.out.has_parent_path()) fs::create_directories(a.out.parent_path());
  s2l::write_file_atomic(a.out, bytes);
  return 0;
}

// ---------------------------------------------------------------- parse

struct ParseArgs {
  fs::path sketches, dataset, out;
  s2l::ParserParams params;
};

int cmd_parse(const ParseArgs& a) {
  require_dir(a.sketches, "--sketches");
  require_dir(a.dataset, "--dataset");
  const auto layouts = read_layout_dir(a.dataset);
  fs::create_directories(a.out);
  std::size_t written = 0, missing = 0, fallback = 0;
  for (const auto& rec : layouts) {
    const fs::path sketch_file = s2l::sketch_path(a.sketches, rec.id);
    if (!fs::exists(sketch_file)) {
      spdlog::warn("parse: no sketch for '{}'", rec.id);
      ++missing;
      continue;
    }
    const auto sketch = s2l::load_sketch(sketch_file);
    const auto assets = asset_descriptions(rec.layout);
    const auto parsed = s2l::parse_sketch(sketch, assets, a.params);
    fallback += static_cast<std::size_t>(std::count(parsed.fallback.begin(), parsed.fallback.end(), true));
    s2l::write_file_atomic(a.out / (rec.id + ".json"), s2l::serialize_layout(parsed.layout, s2l::LayoutFormat::Canonical));
    ++written;
  }
  spdlog::info("parse: {} layouts written, {} without a sketch, {} assets placed by fallback", written, missing,
               fallback);
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  fs::path pred, ref, out, csv;
  bool kind_constrained = false;
  bool include_background = false;
  std::size_t jobs = 0;
};

int cmd_eval(const EvalArgs& a) {
  require_dir(a.pred, "--pred");
  require_dir(a.ref, "--ref");
  const std::size_t jobs = resolve_jobs(a.jobs);
  std::vector<s2l::EvalPair> pairs;
  for (auto& rec : read_layout_dir(a.ref)) {
    s2l::EvalPair pair{rec.id, std::nullopt, std::move(rec.layout)};
    for (const char* ext : {".json", ".textproto"}) {
      const fs::path p = a.pred / (pair.sample_id + ext);
      if (fs::exists(p)) {
        pair.pred = read_layout(p);
        break;
      }
    }
    if (!pair.pred) spdlog::warn("eval: no prediction for '{}'", pair.sample_id);
    pairs.push_back(std::move(pair));
  }
  s2l::EvalOptions options;
  options.match.kind_constrained = a.kind_constrained;
  options.overlap.include_background = a.include_background;
  const auto report = s2l::evaluate_corpus(pairs, options, jobs);

  std::ostringstream out;
  s2l::write_report_jsonl(out, report);
  if (a.out.has_parent_path()) fs::create_directories(a.out.parent_path());
  s2l::write_file_atomic(a.out, out.str());
  if (!a.csv.empty()) {
    std::ostringstream csv;
    s2l::write_report_csv(csv, report);
    if (a.csv.has_parent_path()) fs::create_directories(a.csv.parent_path());
    s2l::write_file_atomic(a.csv, csv.str());
  }
  if (report.aggregate)
    spdlog::info("eval: {} samples, IoU {:.4f} mIoU {:.4f} COS {:.4f}", report.records.size(),
                 report.aggregate->iou.mean, report.aggregate->miou.mean, report.aggregate->cos.mean);
  return 0;
}

// ---------------------------------------------------------------- serve

struct ServeArgs {
  fs::path tasks, out, static_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  double lease_minutes = 10.0;
};

int cmd_serve(const ServeArgs& a) {
  require_file(a.tasks, "--tasks");
  if (!a.static_dir.empty()) require_dir(a.static_dir, "--static");
  if (a.port < 0 || a.port > 65535) throw UsageError("--port must be in [0, 65535]");

  // Signals are taken synchronously by a watcher thread; block them first so
  // every thread spawned below inherits the mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const auto lease = std::chrono::milliseconds(static_cast<long long>(a.lease_minutes * 60'000.0));
  s2l::annotation::AnnotationService service(s2l::annotation::load_tasks(a.tasks), a.out, lease);
  s2l::annotation::HttpServer server(service, a.static_dir.empty() ? std::nullopt
                                                                   : std::optional<fs::path>(a.static_dir));
  const int port = server.bind(a.host, a.port);
  if (port < 0) throw s2l::Error(fmt::format("cannot bind {}:{}", a.host, a.port));
  s2l::write_file_atomic(a.out / "server.json", json{{"host", a.host}, {"port", port}}.dump() + "\n");
  spdlog::info("serving {} tasks on http://{}:{}", service.queue().size(), a.host, port);

  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    spdlog::info("signal {} received, stopping", sig);
    server.stop();
  });
  server.listen_after_bind();
  pthread_kill(watcher.native_handle(), SIGTERM);  // wakes the watcher if the server stopped on its own
  watcher.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("s2l"));
  spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");

  CLI::App app{"Sketch-to-layout toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML or INI file mirroring the flags; flags win on conflict");
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");
  app.add_flag("-q,--quiet", quiet, "Warnings and errors only");

  IngestArgs ingest;
  auto* ing = app.add_subcommand("ingest", "Convert a dataset into canonical layouts plus a manifest");
  ing->add_option("--dataset", ingest.dataset, "publaynet, doclaynet, coco or slides")
      ->required()
      ->check(CLI::IsMember({"publaynet", "doclaynet", "coco", "slides"}));
  ing->add_option("--input", ingest.input, "COCO annotation file, or the slide record directory")->required();
  ing->add_option("--out", ingest.out, "Output directory")->required();
  ing->add_option("--split", ingest.split, "Split named in the manifest")
      ->check(CLI::IsMember({"train", "validation", "test"}))
      ->capture_default_str();
  ing->add_option("--categories", ingest.categories, "Category map JSON");
  ing->add_option("--sidecar", ingest.sidecar, "Text content and font size records");
  ing->add_option("--subsample", ingest.subsample, "Keep a seeded sample of this many layouts");
  auto* ingest_seed = ing->add_option("--seed", ingest.seed, "Subsampling seed")->capture_default_str();

  SynthArgs synth;
  auto* syn = app.add_subcommand("synth", "Compose synthetic sketches from a primitive pool");
  syn->add_option("--dataset", synth.dataset, "Directory of layout files")->required();
  syn->add_option("--primitives", synth.primitives, "Primitive pool (JSONL)")->required();
  syn->add_option("--out", synth.out, "Output directory")->required();
  syn->add_option("--k", synth.params.k, "Nearest-neighbour candidates per asset")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  syn->add_option("--coverage", synth.params.coverage, "Per-asset sketch probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  syn->add_option("--seed", synth.params.seed, "Random seed")->capture_default_str();
  syn->add_option("--primitive-split", synth.primitive_split, "Pool subset to draw from")
      ->check(CLI::IsMember({"all", "train", "validation"}))
      ->capture_default_str();
  syn->add_option("--jobs", synth.jobs, "Worker threads (default: all cores; S2L_JOBS overrides)");

  RenderArgs render;
  auto* ren = app.add_subcommand("render", "Draw a layout or sketch");
  ren->add_option("--input", render.input, "Layout (.json, .textproto) or sketch (.jsonl)")->required();
  ren->add_option("--out", render.out, "Output file")->required();
  ren->add_option("--format", render.format, "svg or pgm")
      ->check(CLI::IsMember({"svg", "pgm"}))
      ->capture_default_str();
  ren->add_option("--stroke-width", render.stroke_width, "Stroke width (canvas units for svg, pixels for pgm)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ren->add_option("--width", render.width, "Raster width in pixels")
      ->check(CLI::Range(1, 16384))
      ->capture_default_str();

  ParseArgs parse;
  auto* par = app.add_subcommand("parse", "Recover layouts from sketches and asset lists");
  par->add_option("--sketches", parse.sketches, "Directory of sketches (<id>.jsonl)")->required();
  par->add_option("--dataset", parse.dataset, "Directory of layouts supplying the asset lists")->required();
  par->add_option("--out", parse.out, "Output directory")->required();
  par->add_option("--tau", parse.params.tau, "Merge gap as a fraction of the canvas diagonal")->capture_default_str();
  par->add_option("--theta-diag", parse.params.theta_diag, "Diagonal ink fraction for image groups")
      ->capture_default_str();
  par->add_option("--rho", parse.params.rho, "Horizontal ink fraction for text groups")->capture_default_str();
  par->add_option("--phi", parse.params.phi_degrees, "Horizontal tolerance in degrees")->capture_default_str();

  EvalArgs eval;
  auto* ev = app.add_subcommand("eval", "Score predicted layouts against references");
  ev->add_option("--pred", eval.pred, "Directory of predicted layouts")->required();
  ev->add_option("--ref", eval.ref, "Directory of reference layouts")->required();
  ev->add_option("--out", eval.out, "Report file (JSONL)")->required();
  ev->add_option("--csv", eval.csv, "Also write the records as CSV");
  ev->add_flag("--kind-constrained", eval.kind_constrained, "Only match assets of the same kind");
  ev->add_flag("--include-background", eval.include_background, "Count background assets in overlap");
  ev->add_option("--jobs", eval.jobs, "Worker threads (default: all cores; S2L_JOBS overrides)");

  ServeArgs serve;
  auto* srv = app.add_subcommand("serve", "Run the annotation service");
  srv->add_option("--tasks", serve.tasks, "Task list (JSONL)")->required();
  srv->add_option("--out", serve.out, "Data directory for submission logs")->required();
  srv->add_option("--host", serve.host, "Listen address")->capture_default_str();
  srv->add_option("--port", serve.port, "Listen port, 0 for any free port")->capture_default_str();
  srv->add_option("--static", serve.static_dir, "Directory with the annotation UI build");
  srv->add_option("--lease-minutes", serve.lease_minutes, "Task lease duration")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("usage", e.what());
    std::cerr << app.help() << std::flush;
    return 2;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : quiet ? spdlog::level::warn : spdlog::level::info);

  try {
    if (*ing) return cmd_ingest(ingest, ingest_seed->count() > 0);
    if (*syn) return cmd_synth(synth);
    if (*ren) return cmd_render(render);
    if (*par) return cmd_parse(parse);
    if (*ev) return cmd_eval(eval);
    if (*srv) return cmd_serve(serve);
  } catch (const UsageError& e) {
    print_error("usage", e.what());
    return 2;
  } catch (const s2l::ParseError& e) {
    print_error("parse", e.what());
    return 1;
  } catch (const s2l::ValidationError& e) {
    print_error("validation", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("runtime", e.what());
    return 1;
  }
  return 2;
}
