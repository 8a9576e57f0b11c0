#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "winnower/project.hpp"

namespace winnower {

inline constexpr const char* kVersion = "0.1.0";

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::optional<std::filesystem::path> static_dir;
};

/// HTTP/1.1 review service over a Project. Reads take the project's shared
/// lock; label writes and round-creating operations take it exclusively.
/// Winnow and topic training run as background jobs polled via /jobs/{id}.
class ReviewServer {
 public:
  ReviewServer(Project& project, ServerOptions options);
  ~ReviewServer();

  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  // Binds and starts serving on a background thread; returns the bound port.
  int start();
  void wait();
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace winnower
