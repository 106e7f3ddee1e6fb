#include "s2l/annotation/types.hpp"

#include <cmath>

#include "s2l/ink_io.hpp"

namespace s2l::annotation {

using nlohmann::json;

std::string_view to_string(TaskMode mode) { return mode == TaskMode::Primitive ? "primitive" : "full_sketch"; }

std::optional<TaskMode> parse_mode(std::string_view s) {
  if (s == "primitive") return TaskMode::Primitive;
  if (s == "full_sketch") return TaskMode::FullSketch;
  return std::nullopt;
}

namespace {

TaskMode mode_field(const json& j) {
  auto mode = parse_mode(j.at("mode").get<std::string>());
  if (!mode) throw ParseError("unknown mode '" + j.at("mode").get<std::string>() + "'");
  return *mode;
}

double positive(const json& j, const char* key) {
  const double v = j.at(key).get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(key) + " must be positive");
  return v;
}

}  // namespace

json task_to_json(const AnnotationTask& t) {
  json j = {{"id", t.id}, {"mode", to_string(t.mode)}};
  if (t.asset) {
    json a = {{"kind", s2l::to_string(t.asset->kind)},
              {"source_width", t.asset->source_width},
              {"source_height", t.asset->source_height},
              {"crop_ref", t.asset->crop_ref}};
    if (t.asset->font_size) a["font_size"] = *t.asset->font_size;
    j["asset"] = std::move(a);
  }
  if (t.layout)
    j["layout"] = {{"layout_id", t.layout->layout_id},
                   {"canvas", {{"width", t.layout->canvas.width}, {"height", t.layout->canvas.height}}},
                   {"underlay_ref", t.layout->underlay_ref}};
  return j;
}

AnnotationTask task_from_json(const json& j) {
  AnnotationTask t;
  try {
    t.id = j.at("id").get<std::string>();
    if (t.id.empty()) throw ValidationError("task id must not be empty");
    t.mode = mode_field(j);
    if (t.mode == TaskMode::Primitive) {
      const json& a = j.at("asset");
      AssetTarget target;
      auto kind = parse_kind(a.at("kind").get<std::string>());
      if (!kind) throw ParseError("task '" + t.id + "' has an unknown asset kind");
      target.kind = *kind;
      target.source_width = positive(a, "source_width");
      target.source_height = positive(a, "source_height");
      if (a.contains("font_size") && !a["font_size"].is_null()) target.font_size = positive(a, "font_size");
      if (target.kind == Kind::Text && !target.font_size)
        throw ValidationError("text task '" + t.id + "' needs a font_size");
      if (target.kind == Kind::Image) target.font_size.reset();
      target.crop_ref = a.value("crop_ref", std::string());
      t.asset = std::move(target);
    } else {
      const json& l = j.at("layout");
      LayoutTarget target;
      target.layout_id = l.at("layout_id").get<std::string>();
      target.canvas = {positive(l.at("canvas"), "width"), positive(l.at("canvas"), "height")};
      target.underlay_ref = l.value("underlay_ref", std::string());
      t.layout = std::move(target);
    }
  } catch (const json::exception& e) {
    throw ParseError("malformed task: " + std::string(e.what()));
  }
  return t;
}

json submission_to_json(const Submission& s) {
  json j = {{"record_id", s.record_id},
            {"task_id", s.task_id},
            {"annotator_id", s.annotator_id},
            {"mode", to_string(s.mode)},
            {"strokes", strokes_to_json(s.strokes)},
            {"stroke_durations_ms", s.stroke_durations_ms},
            {"total_ms", s.total_ms}};
  if (s.surface_transform) j["surface_transform"] = *s.surface_transform;
  return j;
}

Submission submission_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("submission must be an object");
  Submission s;
  try {
    s.record_id = j.value("record_id", std::string());
    s.task_id = j.at("task_id").get<std::string>();
    s.annotator_id = j.at("annotator_id").get<std::string>();
    s.mode = mode_field(j);
    s.strokes = strokes_from_json(j.at("strokes"));
    if (j.contains("stroke_durations_ms")) {
      s.stroke_durations_ms = j["stroke_durations_ms"].get<std::vector<double>>();
    } else {
      for (const auto& st : s.strokes) s.stroke_durations_ms.push_back(st.duration_ms());
    }
    s.total_ms = j.at("total_ms").get<double>();
    if (j.contains("surface_transform") && !j["surface_transform"].is_null())
      s.surface_transform = j["surface_transform"];
  } catch (const json::exception& e) {
    throw ParseError("malformed submission: " + std::string(e.what()));
  }
  if (s.annotator_id.empty()) throw ValidationError("annotator_id must not be empty");
  if (s.strokes.empty()) throw ValidationError("submission has no strokes");
  if (s.stroke_durations_ms.size() != s.strokes.size())
    throw ValidationError("stroke_durations_ms must have one entry per stroke");
  for (double d : s.stroke_durations_ms)
    if (!(d >= 0.0) || !std::isfinite(d)) throw ValidationError("stroke durations must be non-negative");
  if (!(s.total_ms >= 0.0) || !std::isfinite(s.total_ms)) throw ValidationError("total_ms must be non-negative");
  return s;
}

}  // namespace s2l::annotation
