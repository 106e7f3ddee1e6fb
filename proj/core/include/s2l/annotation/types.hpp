#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "s2l/error.hpp"
#include "s2l/ink.hpp"
#include "s2l/layout.hpp"

namespace s2l::annotation {

enum class TaskMode { Primitive, FullSketch };

std::string_view to_string(TaskMode mode);
std::optional<TaskMode> parse_mode(std::string_view s);

// Asset shown to the annotator in primitive mode.
struct AssetTarget {
  Kind kind = Kind::Text;
  double source_width = 0.0;
  double source_height = 0.0;
  std::optional<double> font_size;
  std::string crop_ref;
};

// Page shown as underlay in full-sketch mode.
struct LayoutTarget {
  std::string layout_id;
  Canvas canvas;
  std::string underlay_ref;
};

struct AnnotationTask {
  std::string id;
  TaskMode mode = TaskMode::Primitive;
  std::optional<AssetTarget> asset;    // Primitive mode
  std::optional<LayoutTarget> layout;  // FullSketch mode
};

enum class TaskStatus { Pending, Done };

struct Submission {
  std::string record_id;  // assigned by the store
  std::string task_id;
  std::string annotator_id;
  TaskMode mode = TaskMode::Primitive;
  std::vector<Stroke> strokes;
  std::vector<double> stroke_durations_ms;
  double total_ms = 0.0;
  // Surface-to-target map reported by the client; stored verbatim.
  std::optional<nlohmann::json> surface_transform;

  bool operator==(const Submission&) const = default;
};

// Failure that maps onto an HTTP status.
class RequestError : public Error {
 public:
  RequestError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

nlohmann::json task_to_json(const AnnotationTask& task);
AnnotationTask task_from_json(const nlohmann::json& j);

nlohmann::json submission_to_json(const Submission& submission);
// Accepts the stored form and the client form (no record id, durations optional).
Submission submission_from_json(const nlohmann::json& j);

}  // namespace s2l::annotation
