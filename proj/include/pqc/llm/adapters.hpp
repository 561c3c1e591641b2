#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pqc/common/error.hpp"

namespace pqc::llm {

enum class CheckStage { syntax, functional, timing };

std::string_view to_string(CheckStage stage);

/// Outcome of one checker run on a candidate bundle.
struct Verdict {
  bool passed = false;
  std::string text;
  std::optional<double> critical_path_ns;

  static Verdict pass(std::string text = {}) { return {true, std::move(text), std::nullopt}; }
  static Verdict fail(std::string text) { return {false, std::move(text), std::nullopt}; }
};

/// Files of the candidate under check.
struct ArtifactPaths {
  std::filesystem::path module;
  std::filesystem::path testbench;
  std::filesystem::path script;
  std::filesystem::path constraints;
  std::filesystem::path vectors;
};

/// The checker itself broke (could not start, killed, timed out). Distinct
/// from a verdict that says the candidate is wrong.
class AdapterCrashError : public Error {
 public:
  AdapterCrashError(CheckStage stage, const std::string& what)
      : Error(ErrorKind::verification, std::string(to_string(stage)) + " adapter crashed: " + what),
        stage_(stage) {}
  CheckStage stage() const { return stage_; }

 private:
  CheckStage stage_;
};

class CheckAdapter {
 public:
  virtual ~CheckAdapter() = default;
  /// Returns a verdict, or throws AdapterCrashError.
  virtual Verdict check(CheckStage stage, const ArtifactPaths& paths) = 0;
};

/// Runs an external command with the artifact paths appended as arguments
/// (module, testbench, script, constraints, vectors). Exit status 0 passes;
/// anything else fails with standard output as the verdict text. A line
/// "critical_path_ns=<value>" on standard output sets the estimate.
class CommandAdapter final : public CheckAdapter {
 public:
  explicit CommandAdapter(std::vector<std::string> argv,
                          std::chrono::milliseconds timeout = std::chrono::seconds(300));
  Verdict check(CheckStage stage, const ArtifactPaths& paths) override;

 private:
  std::vector<std::string> argv_;
  std::chrono::milliseconds timeout_;
};

/// Pulls "critical_path_ns=<value>" out of checker output, if present.
std::optional<double> parse_critical_path(std::string_view text);

}  // namespace pqc::llm
