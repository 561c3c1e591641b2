#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>

#include "pqc/common/error.hpp"

namespace pqc::llm {

/// Anything that turns a prompt into a response.
class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual std::string complete(const std::string& prompt) = 0;
  virtual std::string describe() const = 0;
};

/// Stable key of a prompt: lowercase hex SHA-256 of its bytes.
std::string prompt_digest(std::string_view prompt);

class MissingFixtureError : public BackendError {
 public:
  explicit MissingFixtureError(std::string digest)
      : BackendError("no replay fixture for prompt digest " + digest), digest_(std::move(digest)) {}
  const std::string& digest() const { return digest_; }

 private:
  std::string digest_;
};

/// Directory of recorded responses, one file per prompt named by its digest.
class ReplayBackend final : public CompletionBackend {
 public:
  explicit ReplayBackend(std::filesystem::path store);

  std::string complete(const std::string& prompt) override;
  std::string describe() const override;

  /// Stores a response for a prompt; returns the digest used as file name.
  static std::string record(const std::filesystem::path& store, std::string_view prompt,
                            std::string_view response);

 private:
  std::filesystem::path store_;
};

struct RemoteConfig {
  std::string endpoint;  // full URL of the chat-completion endpoint
  std::string model;
  std::string credential_env = "OPENAI_API_KEY";
  std::chrono::seconds timeout{60};
  int max_retries = 2;
  std::chrono::milliseconds retry_backoff{500};
};

/// Chat-completion client. The constructor validates the configuration and
/// reads the credential, so a missing key fails before any network traffic.
class RemoteBackend final : public CompletionBackend {
 public:
  explicit RemoteBackend(RemoteConfig config);

  std::string complete(const std::string& prompt) override;
  std::string describe() const override;

 private:
  RemoteConfig config_;
  std::string credential_;
  std::string scheme_host_port_;
  std::string path_;
};

}  // namespace pqc::llm
