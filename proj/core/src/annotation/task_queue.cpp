#include "s2l/annotation/task_queue.hpp"

#include <fstream>

#include "s2l/error.hpp"

namespace s2l::annotation {

TaskQueue::TaskQueue(std::vector<AnnotationTask> tasks, std::chrono::milliseconds lease, ClockFn clock)
    : lease_(lease), clock_(std::move(clock)) {
  tasks_.reserve(tasks.size());
  for (auto& t : tasks) {
    if (!index_.emplace(t.id, tasks_.size()).second) throw ValidationError("duplicate task id '" + t.id + "'");
    tasks_.push_back({std::move(t), TaskStatus::Pending, std::nullopt});
  }
}

std::optional<AnnotationTask> TaskQueue::next(TaskMode mode, const std::string& annotator) {
  std::lock_guard lock(mu_);
  const auto now = clock_();
  Entry* free = nullptr;
  for (auto& e : tasks_) {
    if (e.task.mode != mode || e.status != TaskStatus::Pending) continue;
    if (e.lease && e.lease->annotator == annotator && e.lease->expires > now) {
      free = &e;  // hand back what this annotator already holds
      break;
    }
    if (!free && (!e.lease || e.lease->expires <= now)) free = &e;
  }
  if (!free) return std::nullopt;
  free->lease = Lease{annotator, now + lease_};
  return free->task;
}

const AnnotationTask* TaskQueue::find(const std::string& task_id) const {
  auto it = index_.find(task_id);
  return it == index_.end() ? nullptr : &tasks_[it->second].task;
}

std::optional<TaskStatus> TaskQueue::status(const std::string& task_id) const {
  std::lock_guard lock(mu_);
  auto it = index_.find(task_id);
  if (it == index_.end()) return std::nullopt;
  return tasks_[it->second].status;
}

std::optional<std::string> TaskQueue::lease_holder(const std::string& task_id) const {
  std::lock_guard lock(mu_);
  auto it = index_.find(task_id);
  if (it == index_.end()) return std::nullopt;
  const auto& e = tasks_[it->second];
  if (!e.lease || e.lease->expires <= clock_()) return std::nullopt;
  return e.lease->annotator;
}

void TaskQueue::complete(const std::string& task_id, const std::string& annotator) {
  std::lock_guard lock(mu_);
  auto it = index_.find(task_id);
  if (it == index_.end()) throw RequestError(404, "unknown task '" + task_id + "'");
  auto& e = tasks_[it->second];
  if (e.status == TaskStatus::Done) throw RequestError(409, "task '" + task_id + "' was already submitted");
  if (!e.lease || e.lease->annotator != annotator || e.lease->expires <= clock_())
    throw RequestError(409, "task '" + task_id + "' is not leased to '" + annotator + "'");
  e.status = TaskStatus::Done;
  e.lease.reset();
}

void TaskQueue::reopen(const std::string& task_id, const std::string& annotator) {
  std::lock_guard lock(mu_);
  auto it = index_.find(task_id);
  if (it == index_.end()) return;
  tasks_[it->second].status = TaskStatus::Pending;
  tasks_[it->second].lease = Lease{annotator, clock_() + lease_};
}

void TaskQueue::mark_done(const std::string& task_id) {
  std::lock_guard lock(mu_);
  auto it = index_.find(task_id);
  if (it == index_.end()) return;
  tasks_[it->second].status = TaskStatus::Done;
  tasks_[it->second].lease.reset();
}

std::size_t TaskQueue::pending(TaskMode mode) const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& e : tasks_)
    if (e.task.mode == mode && e.status == TaskStatus::Pending) ++n;
  return n;
}

std::vector<AnnotationTask> load_tasks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open task file " + path.string());
  std::vector<AnnotationTask> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(task_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace s2l::annotation
