#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "s2l/annotation/append_log.hpp"
#include "s2l/annotation/types.hpp"

namespace s2l::annotation {

// Submissions persisted as one append-only log per mode under `dir`, with an
// in-memory index rebuilt from the logs on construction. Readers work on an
// immutable snapshot of the index.
class SubmissionStore {
 public:
  explicit SubmissionStore(std::filesystem::path dir);

  // Assigns the record id, appends durably, then publishes to the index.
  Submission append(Submission submission);

  std::optional<Submission> get(const std::string& record_id) const;
  // Records in append order.
  std::vector<Submission> records() const;
  std::size_t size() const;

  static std::filesystem::path log_path(const std::filesystem::path& dir, TaskMode mode);

 private:
  struct Index {
    std::vector<std::shared_ptr<const Submission>> ordered;
    std::map<std::string, std::shared_ptr<const Submission>> by_id;
  };

  std::shared_ptr<const Index> snapshot() const;

  std::filesystem::path dir_;
  std::unique_ptr<AppendLog> primitive_log_;
  std::unique_ptr<AppendLog> sketch_log_;
  std::size_t next_seq_ = 1;
  std::mutex write_mu_;
  mutable std::mutex snap_mu_;
  std::shared_ptr<const Index> index_;
};

}  // namespace s2l::annotation
