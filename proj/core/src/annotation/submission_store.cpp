#include "s2l/annotation/submission_store.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace s2l::annotation {

namespace {

std::size_t sequence_of(const std::string& record_id) {
  const auto dash = record_id.rfind('-');
  if (dash == std::string::npos) return 0;
  try {
    return std::stoul(record_id.substr(dash + 1));
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

std::filesystem::path SubmissionStore::log_path(const std::filesystem::path& dir, TaskMode mode) {
  return dir / (std::string(to_string(mode)) + ".jsonl");
}

SubmissionStore::SubmissionStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
  auto index = std::make_shared<Index>();
  for (TaskMode mode : {TaskMode::Primitive, TaskMode::FullSketch}) {
    const auto path = log_path(dir_, mode);
    std::size_t line_no = 0;
    for (const auto& line : AppendLog::read_lines(path)) {
      ++line_no;
      try {
        auto rec = std::make_shared<const Submission>(submission_from_json(nlohmann::json::parse(line)));
        if (rec->record_id.empty() || !index->by_id.emplace(rec->record_id, rec).second) {
          spdlog::warn("{}:{}: record without a unique id ignored", path.string(), line_no);
          continue;
        }
        index->ordered.push_back(rec);
      } catch (const std::exception& e) {
        spdlog::warn("{}:{}: unreadable record ignored: {}", path.string(), line_no, e.what());
      }
    }
  }
  std::stable_sort(index->ordered.begin(), index->ordered.end(),
                   [](const auto& a, const auto& b) { return sequence_of(a->record_id) < sequence_of(b->record_id); });
  for (const auto& r : index->ordered) next_seq_ = std::max(next_seq_, sequence_of(r->record_id) + 1);
  index_ = std::move(index);
  primitive_log_ = std::make_unique<AppendLog>(log_path(dir_, TaskMode::Primitive));
  sketch_log_ = std::make_unique<AppendLog>(log_path(dir_, TaskMode::FullSketch));
}

Submission SubmissionStore::append(Submission submission) {
  std::lock_guard lock(write_mu_);
  submission.record_id = fmt::format("{}-{:06d}", to_string(submission.mode), next_seq_);
  const auto j = submission_to_json(submission);
  // Keep exactly what a replay would read back.
  auto stored = std::make_shared<const Submission>(submission_from_json(j));
  (submission.mode == TaskMode::Primitive ? primitive_log_ : sketch_log_)->append(j.dump());
  ++next_seq_;

  auto next = std::make_shared<Index>(*snapshot());
  next->ordered.push_back(stored);
  next->by_id.emplace(stored->record_id, stored);
  {
    std::lock_guard snap(snap_mu_);
    index_ = std::move(next);
  }
  return *stored;
}

std::shared_ptr<const SubmissionStore::Index> SubmissionStore::snapshot() const {
  std::lock_guard lock(snap_mu_);
  return index_;
}

std::optional<Submission> SubmissionStore::get(const std::string& record_id) const {
  const auto index = snapshot();
  auto it = index->by_id.find(record_id);
  if (it == index->by_id.end()) return std::nullopt;
  return *it->second;
}

std::vector<Submission> SubmissionStore::records() const {
  const auto index = snapshot();
  std::vector<Submission> out;
  out.reserve(index->ordered.size());
  for (const auto& r : index->ordered) out.push_back(*r);
  return out;
}

std::size_t SubmissionStore::size() const { return snapshot()->ordered.size(); }

}  // namespace s2l::annotation
