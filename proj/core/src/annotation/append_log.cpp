#include "s2l/annotation/append_log.hpp"

#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "s2l/error.hpp"

namespace s2l::annotation {

namespace {

[[noreturn]] void fail(const std::string& what, const std::filesystem::path& path) {
  throw Error(what + " " + path.string() + ": " + std::strerror(errno));
}

}  // namespace

AppendLog::AppendLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) fail("cannot open log", path_);
  // Drop a torn tail left by a crash so the next record starts on its own line.
  const auto lines = read_lines(path_);
  std::size_t keep = 0;
  for (const auto& l : lines) keep += l.size() + 1;
  if (keep != std::filesystem::file_size(path_) && ::truncate(path_.c_str(), static_cast<off_t>(keep)) != 0)
    fail("cannot truncate torn log", path_);
}

AppendLog::~AppendLog() {
  if (fd_ >= 0) ::close(fd_);
}

void AppendLog::append(std::string_view line) {
  std::string buf(line);
  buf.push_back('\n');
  std::lock_guard lock(mu_);
  std::size_t done = 0;
  while (done < buf.size()) {
    const ssize_t n = ::write(fd_, buf.data() + done, buf.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("cannot append to", path_);
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) fail("cannot sync", path_);
}

std::vector<std::string> AppendLog::read_lines(const std::filesystem::path& path) {
  std::vector<std::string> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string data = ss.str();
  std::size_t start = 0;
  for (std::size_t nl; (nl = data.find('\n', start)) != std::string::npos; start = nl + 1)
    out.push_back(data.substr(start, nl - start));
  return out;
}

}  // namespace s2l::annotation
