#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "s2l/annotation/submission_store.hpp"
#include "s2l/annotation/task_queue.hpp"
#include "s2l/annotation/types.hpp"

namespace s2l::annotation {

// How exported primitives are assigned to the train / validation split.
struct SplitRule {
  enum class Type { AllTrain, AllValidation, Alternate, Hash } type = Type::Alternate;
  double train_fraction = 0.5;  // Hash only

  // "train", "validation", "alternate" or "hash:<fraction>".
  static SplitRule parse(std::string_view s);
  Split assign(std::size_t position, std::string_view record_id) const;
};

struct ModeTiming {
  std::size_t count = 0;
  double mean_seconds = 0.0;
  double stddev_seconds = 0.0;  // population
};

struct TimingSummary {
  ModeTiming primitive;
  ModeTiming full_sketch;
};

struct PoolExport {
  std::vector<Primitive> primitives;  // primitive-mode submissions, append order
  TimingSummary timing;
};

TimingSummary summarize_timing(const std::vector<Submission>& submissions);
nlohmann::json timing_to_json(const TimingSummary& timing);

// Transport-free annotation backend.
class AnnotationService {
 public:
  AnnotationService(std::vector<AnnotationTask> tasks, std::filesystem::path data_dir,
                    std::chrono::milliseconds lease = kDefaultLease, ClockFn clock = Clock::now);

  std::optional<AnnotationTask> next_task(TaskMode mode, const std::string& annotator);

  // Validates, normalizes primitive strokes into the asset frame, appends and
  // returns the stored record. Throws RequestError.
  Submission submit(Submission submission);

  std::optional<Submission> submission(const std::string& record_id) const;
  PoolExport export_pool(const SplitRule& rule) const;

  TaskQueue& queue() { return queue_; }
  const SubmissionStore& store() const { return store_; }

 private:
  TaskQueue queue_;
  SubmissionStore store_;
};

}  // namespace s2l::annotation
