#pragma once

#include <filesystem>
#include <memory>
#include <string>

namespace spider {

/// Read-only HTTP server over one directory. GET and HEAD only; anything
/// outside the directory or missing is a 404.
class StaticServer {
 public:
  /// Throws IoError when `root` is not a directory.
  explicit StaticServer(std::filesystem::path root);
  ~StaticServer();
  StaticServer(const StaticServer&) = delete;
  StaticServer& operator=(const StaticServer&) = delete;

  /// Returns false when the address cannot be bound.
  bool bind(const std::string& host, int port);
  /// Binds an ephemeral port and returns it, or -1.
  int bind_to_any_port(const std::string& host);
  /// Blocks serving requests until stop() is called.
  void listen();
  void stop();
  /// Blocks until listen() has started accepting.
  void wait_until_ready() const;
  bool running() const;
  const std::filesystem::path& root() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Content type chosen by file extension.
std::string content_type_for(const std::filesystem::path& path);

}  // namespace spider
