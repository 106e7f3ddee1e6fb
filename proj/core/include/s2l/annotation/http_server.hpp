#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "s2l/annotation/service.hpp"

namespace s2l::annotation {

// HTTP front end:
//   GET  /api/tasks/next?mode=<primitive|full_sketch>&annotator=<id>
//   POST /api/submissions
//   GET  /api/submissions/{id}
//   GET  /api/export?split_rule=<rule>
//   GET  /   static UI files from `static_dir`, or a placeholder page
class HttpServer {
 public:
  HttpServer(AnnotationService& service, std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();
  bool is_running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace s2l::annotation
