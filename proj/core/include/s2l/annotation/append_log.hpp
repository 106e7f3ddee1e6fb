#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace s2l::annotation {

// Append-only line log. Each append writes one full line and fsyncs before
// returning. Appends are serialized by an internal mutex.
class AppendLog {
 public:
  explicit AppendLog(std::filesystem::path path);
  ~AppendLog();

  AppendLog(const AppendLog&) = delete;
  AppendLog& operator=(const AppendLog&) = delete;

  void append(std::string_view line);
  const std::filesystem::path& path() const { return path_; }

  // Complete lines of an existing log. A trailing line without '\n' (torn
  // write) is dropped.
  static std::vector<std::string> read_lines(const std::filesystem::path& path);

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  std::mutex mu_;
};

}  // namespace s2l::annotation
