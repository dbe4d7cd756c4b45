#include "spider/server.hpp"

#include "spider/error.hpp"

#include <httplib.h>

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace spider {

std::string content_type_for(const std::filesystem::path& path) {
  static const std::map<std::string, std::string> types{
      {".html", "text/html; charset=utf-8"}, {".js", "text/javascript"},    {".mjs", "text/javascript"},
      {".css", "text/css"},                  {".json", "application/json"}, {".svg", "image/svg+xml"},
      {".obj", "text/plain"},                {".wav", "audio/wav"},         {".txt", "text/plain"},
      {".csv", "text/csv"},                  {".png", "image/png"},         {".map", "application/json"}};
  const auto it = types.find(path.extension().string());
  return it == types.end() ? "application/octet-stream" : it->second;
}

struct StaticServer::Impl {
  std::filesystem::path root;
  httplib::Server http;

  // Resolves a request path inside root, or nothing when it escapes or is absent.
  std::optional<std::filesystem::path> resolve(const std::string& target) const {
    std::string rel = target;
    while (!rel.empty() && rel.front() == '/') rel.erase(rel.begin());
    if (rel.empty()) rel = "index.html";
    std::error_code ec;
    auto full = std::filesystem::weakly_canonical(root / rel, ec);
    if (ec) return std::nullopt;
    if (std::filesystem::is_directory(full, ec)) full /= "index.html";
    const auto rel_check = full.lexically_relative(root);
    if (rel_check.empty() || *rel_check.begin() == "..") return std::nullopt;
    if (!std::filesystem::is_regular_file(full, ec)) return std::nullopt;
    return full;
  }

  void serve(const httplib::Request& req, httplib::Response& res) const {
    const auto path = resolve(req.path);
    if (!path) {
      res.status = 404;
      res.set_content("not found\n", "text/plain");
      return;
    }
    std::ifstream in(*path, std::ios::binary);
    if (!in) {
      res.status = 404;
      res.set_content("not found\n", "text/plain");
      return;
    }
    std::ostringstream body;
    body << in.rdbuf();
    res.status = 200;
    res.set_content(body.str(), content_type_for(*path));
  }
};

StaticServer::StaticServer(std::filesystem::path root) : impl_(std::make_unique<Impl>()) {
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec)) throw IoError("not a directory: " + root.string());
  impl_->root = std::filesystem::canonical(root);
  auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->serve(req, res); };
  impl_->http.Get(".*", handler);
  auto refuse = [](const httplib::Request&, httplib::Response& res) {
    res.status = 405;
    res.set_content("read-only\n", "text/plain");
  };
  impl_->http.Post(".*", refuse);
  impl_->http.Put(".*", refuse);
  impl_->http.Delete(".*", refuse);
  impl_->http.Patch(".*", refuse);
}

StaticServer::~StaticServer() { stop(); }

bool StaticServer::bind(const std::string& host, int port) { return impl_->http.bind_to_port(host, port); }

int StaticServer::bind_to_any_port(const std::string& host) { return impl_->http.bind_to_any_port(host); }

void StaticServer::listen() { impl_->http.listen_after_bind(); }

void StaticServer::stop() {
  if (impl_) impl_->http.stop();
}

void StaticServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

bool StaticServer::running() const { return impl_->http.is_running(); }

const std::filesystem::path& StaticServer::root() const { return impl_->root; }

}  // namespace spider
