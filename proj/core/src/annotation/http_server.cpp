#include "s2l/annotation/http_server.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "s2l/ink_io.hpp"

namespace s2l::annotation {

namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";

constexpr const char* kPlaceholder = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>sketch annotation</title></head>
<body><p>The annotation service is running. Start it with a static UI directory to draw here.</p>
<ul><li>GET /api/tasks/next?mode=primitive|full_sketch&amp;annotator=ID</li>
<li>POST /api/submissions</li><li>GET /api/submissions/ID</li><li>GET /api/export?split_rule=RULE</li></ul>
</body></html>
)";

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  reply(res, status, json{{"error", message}});
}

// Runs a handler and maps library failures onto HTTP statuses.
template <typename F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const RequestError& e) {
    reply_error(res, e.status(), e.what());
  } catch (const s2l::Error& e) {
    reply_error(res, 400, e.what());
  } catch (const json::exception& e) {
    reply_error(res, 400, e.what());
  } catch (const std::exception& e) {
    spdlog::error("request failed: {}", e.what());
    reply_error(res, 500, "internal error");
  }
}

}  // namespace

struct HttpServer::Impl {
  AnnotationService& service;
  httplib::Server server;

  Impl(AnnotationService& s, const std::optional<std::filesystem::path>& static_dir) : service(s) {
    server.Get("/api/tasks/next", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto mode = parse_mode(req.get_param_value("mode"));
        if (!mode) throw RequestError(400, "mode must be primitive or full_sketch");
        auto task = service.next_task(*mode, req.get_param_value("annotator"));
        if (!task) return reply(res, 200, json{{"status", "none_remaining"}});
        reply(res, 200, json{{"status", "ok"}, {"task", task_to_json(*task)}});
      });
    });

    server.Post("/api/submissions", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto stored = service.submit(submission_from_json(json::parse(req.body)));
        reply(res, 201, json{{"record_id", stored.record_id}, {"record", submission_to_json(stored)}});
      });
    });

    server.Get(R"(/api/submissions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const std::string id = req.matches[1];
        auto rec = service.submission(id);
        if (!rec) throw RequestError(404, "unknown record '" + id + "'");
        reply(res, 200, submission_to_json(*rec));
      });
    });

    server.Get("/api/export", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto pool = service.export_pool(SplitRule::parse(req.get_param_value("split_rule")));
        json primitives = json::array();
        for (const auto& p : pool.primitives) primitives.push_back(primitive_to_json(p));
        reply(res, 200, json{{"primitives", std::move(primitives)}, {"timing", timing_to_json(pool.timing)}});
      });
    });

    if (static_dir) {
      if (!server.set_mount_point("/", static_dir->string()))
        throw s2l::Error("static directory " + static_dir->string() + " does not exist");
    } else {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kPlaceholder, "text/html"); });
    }
  }
};

HttpServer::HttpServer(AnnotationService& service, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service, static_dir)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

bool HttpServer::is_running() const { return impl_->server.is_running(); }

}  // namespace s2l::annotation
