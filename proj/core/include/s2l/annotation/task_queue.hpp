#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "s2l/annotation/types.hpp"

namespace s2l::annotation {

using Clock = std::chrono::steady_clock;
using ClockFn = std::function<Clock::time_point()>;

inline constexpr std::chrono::minutes kDefaultLease{10};

// In-memory task list with per-annotator leases. Thread-safe.
class TaskQueue {
 public:
  explicit TaskQueue(std::vector<AnnotationTask> tasks, std::chrono::milliseconds lease = kDefaultLease,
                     ClockFn clock = Clock::now);

  // First pending task of `mode` that is free, already leased to `annotator`,
  // or whose lease expired. The task is (re)leased to `annotator`.
  std::optional<AnnotationTask> next(TaskMode mode, const std::string& annotator);

  const AnnotationTask* find(const std::string& task_id) const;
  std::optional<TaskStatus> status(const std::string& task_id) const;
  // Current unexpired lease holder.
  std::optional<std::string> lease_holder(const std::string& task_id) const;

  // Atomically checks that the task is pending and leased to `annotator`,
  // then marks it done. Throws RequestError (404 / 409).
  void complete(const std::string& task_id, const std::string& annotator);
  // Undo complete() when the record could not be stored.
  void reopen(const std::string& task_id, const std::string& annotator);
  // Used on startup replay.
  void mark_done(const std::string& task_id);

  std::size_t size() const { return tasks_.size(); }
  std::size_t pending(TaskMode mode) const;

 private:
  struct Lease {
    std::string annotator;
    Clock::time_point expires;
  };
  struct Entry {
    AnnotationTask task;
    TaskStatus status = TaskStatus::Pending;
    std::optional<Lease> lease;
  };

  std::vector<Entry> tasks_;
  std::map<std::string, std::size_t> index_;
  std::chrono::milliseconds lease_;
  ClockFn clock_;
  mutable std::mutex mu_;
};

std::vector<AnnotationTask> load_tasks(const std::filesystem::path& path);

}  // namespace s2l::annotation
