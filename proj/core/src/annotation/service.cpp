#include "s2l/annotation/service.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "s2l/rng.hpp"

namespace s2l::annotation {

SplitRule SplitRule::parse(std::string_view s) {
  if (s == "train") return {Type::AllTrain};
  if (s == "validation") return {Type::AllValidation};
  if (s == "alternate" || s.empty()) return {Type::Alternate};
  if (s.substr(0, 5) == "hash:") {
    const std::string num(s.substr(5));
    std::size_t used = 0;
    double f = -1.0;
    try {
      f = std::stod(num, &used);
    } catch (const std::exception&) {
    }
    if (used == num.size() && f >= 0.0 && f <= 1.0) return {Type::Hash, f};
  }
  throw RequestError(400, "unknown split rule '" + std::string(s) + "'");
}

Split SplitRule::assign(std::size_t position, std::string_view record_id) const {
  switch (type) {
    case Type::AllTrain:
      return Split::Train;
    case Type::AllValidation:
      return Split::Validation;
    case Type::Alternate:
      return position % 2 == 0 ? Split::Train : Split::Validation;
    case Type::Hash:
      return Rng(derive_seed(0, {"split", record_id})).uniform() < train_fraction ? Split::Train
                                                                                 : Split::Validation;
  }
  return Split::Train;
}

TimingSummary summarize_timing(const std::vector<Submission>& submissions) {
  auto summarize = [&](TaskMode mode) {
    ModeTiming t;
    double sum = 0.0;
    for (const auto& s : submissions)
      if (s.mode == mode) {
        ++t.count;
        sum += s.total_ms / 1000.0;
      }
    if (t.count == 0) return t;
    t.mean_seconds = sum / static_cast<double>(t.count);
    double ss = 0.0;
    for (const auto& s : submissions)
      if (s.mode == mode) ss += std::pow(s.total_ms / 1000.0 - t.mean_seconds, 2);
    t.stddev_seconds = std::sqrt(ss / static_cast<double>(t.count));
    return t;
  };
  return {summarize(TaskMode::Primitive), summarize(TaskMode::FullSketch)};
}

nlohmann::json timing_to_json(const TimingSummary& timing) {
  auto one = [](const ModeTiming& t) {
    return nlohmann::json{{"count", t.count}, {"mean_seconds", t.mean_seconds}, {"stddev_seconds", t.stddev_seconds}};
  };
  return {{"primitive", one(timing.primitive)}, {"full_sketch", one(timing.full_sketch)}};
}

AnnotationService::AnnotationService(std::vector<AnnotationTask> tasks, std::filesystem::path data_dir,
                                     std::chrono::milliseconds lease, ClockFn clock)
    : queue_(std::move(tasks), lease, std::move(clock)), store_(std::move(data_dir)) {
  for (const auto& r : store_.records()) queue_.mark_done(r.task_id);
}

std::optional<AnnotationTask> AnnotationService::next_task(TaskMode mode, const std::string& annotator) {
  if (annotator.empty()) throw RequestError(400, "annotator id must not be empty");
  return queue_.next(mode, annotator);
}

Submission AnnotationService::submit(Submission submission) {
  const AnnotationTask* task = queue_.find(submission.task_id);
  if (!task) throw RequestError(404, "unknown task '" + submission.task_id + "'");
  if (task->mode != submission.mode)
    throw RequestError(400, "task '" + task->id + "' expects mode " + std::string(to_string(task->mode)));

  if (task->mode == TaskMode::Primitive) {
    // Client strokes arrive in asset pixels; store them in the unit frame.
    const double w = task->asset->source_width, h = task->asset->source_height;
    const double lo = -kOverdrawTolerance, hi = 1.0 + kOverdrawTolerance;
    for (auto& s : submission.strokes)
      for (auto& p : s.points) {
        p.x = std::clamp(p.x / w, lo, hi);
        p.y = std::clamp(p.y / h, lo, hi);
      }
  }

  const std::string annotator = submission.annotator_id;
  queue_.complete(task->id, annotator);
  try {
    return store_.append(std::move(submission));
  } catch (...) {
    queue_.reopen(task->id, annotator);
    throw;
  }
}

std::optional<Submission> AnnotationService::submission(const std::string& record_id) const {
  return store_.get(record_id);
}

PoolExport AnnotationService::export_pool(const SplitRule& rule) const {
  PoolExport out;
  const auto records = store_.records();
  out.timing = summarize_timing(records);
  std::size_t position = 0;
  for (const auto& r : records) {
    if (r.mode != TaskMode::Primitive) continue;
    const AnnotationTask* task = queue_.find(r.task_id);
    if (!task || !task->asset) {
      spdlog::warn("record {} refers to unknown task {}, left out of the export", r.record_id, r.task_id);
      continue;
    }
    Primitive p;
    p.id = r.record_id;
    p.kind = task->asset->kind;
    p.strokes = r.strokes;
    p.source_width = task->asset->source_width;
    p.source_height = task->asset->source_height;
    p.source_aspect = p.source_width / p.source_height;
    if (p.kind == Kind::Text) p.source_font_size = task->asset->font_size;
    p.split = rule.assign(position++, r.record_id);
    out.primitives.push_back(std::move(p));
  }
  return out;
}

}  // namespace s2l::annotation
