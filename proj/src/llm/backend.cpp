#include "pqc/llm/backend.hpp"

#include <httplib.h>

#include <cstdlib>
#include <thread>

#include <fmt/format.h>

#include "pqc/common/digest.hpp"
#include "pqc/common/fs.hpp"
#include "pqc/common/interchange.hpp"

namespace pqc::llm {

namespace fs = std::filesystem;

std::string prompt_digest(std::string_view prompt) { return sha256_hex(prompt); }

// ---------------------------------------------------------------------------

ReplayBackend::ReplayBackend(fs::path store) : store_(std::move(store)) {
  if (!fs::is_directory(store_)) {
    throw UsageError("replay store " + store_.string() + " is not a directory");
  }
}

std::string ReplayBackend::complete(const std::string& prompt) {
  if (prompt.empty()) {
    throw UsageError("empty prompt");
  }
  const std::string digest = prompt_digest(prompt);
  const fs::path file = store_ / digest;
  if (!fs::is_regular_file(file)) {
    throw MissingFixtureError(digest);
  }
  return read_file(file);
}

std::string ReplayBackend::describe() const { return "replay:" + store_.string(); }

std::string ReplayBackend::record(const fs::path& store, std::string_view prompt,
                                  std::string_view response) {
  const std::string digest = prompt_digest(prompt);
  write_file_atomic(store / digest, response);
  return digest;
}

// ---------------------------------------------------------------------------

RemoteBackend::RemoteBackend(RemoteConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) {
    throw UsageError("remote backend needs an endpoint URL");
  }
  if (config_.model.empty()) {
    throw UsageError("remote backend needs a model identifier");
  }
  if (config_.credential_env.empty()) {
    throw UsageError("remote backend needs a credential environment variable name");
  }
  const char* key = std::getenv(config_.credential_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw UsageError("credential environment variable " + config_.credential_env +
                     " is not set");
  }
  credential_ = key;

  const auto scheme_end = config_.endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw UsageError("endpoint URL must start with http:// or https://");
  }
  const std::string scheme = config_.endpoint.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw UsageError("unsupported endpoint scheme " + scheme);
  }
  const auto path_start = config_.endpoint.find('/', scheme_end + 3);
  scheme_host_port_ = config_.endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : config_.endpoint.substr(path_start);
  if (config_.max_retries < 0) {
    throw UsageError("max retries must not be negative");
  }
}

std::string RemoteBackend::describe() const {
  return "remote:" + config_.endpoint + " model=" + config_.model;
}

std::string RemoteBackend::complete(const std::string& prompt) {
  if (prompt.empty()) {
    throw UsageError("empty prompt");
  }
  Json body;
  body["model"] = config_.model;
  body["temperature"] = 0;
  body["messages"] = Json::array({Json{{"role", "user"}, {"content", prompt}}});
  const std::string payload = body.dump();

  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  client.set_bearer_token_auth(credential_);

  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(config_.retry_backoff * attempt);
    }
    auto res = client.Post(path_, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = fmt::format("HTTP {}", res->status);
      continue;
    }
    if (res->status != 200) {
      throw BackendError(fmt::format("completion endpoint returned HTTP {}: {}", res->status,
                                     res->body.substr(0, 500)));
    }
    try {
      const Json reply = Json::parse(res->body);
      return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const Json::exception& e) {
      throw BackendError(std::string("unexpected completion response: ") + e.what());
    }
  }
  throw BackendError(fmt::format("completion request failed after {} attempt(s): {}",
                                 config_.max_retries + 1, last_error));
}

}  // namespace pqc::llm
