#pragma once

#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "pqc/common/error.hpp"
#include "pqc/common/fs.hpp"
#include "pqc/llm/adapters.hpp"
#include "pqc/llm/backend.hpp"

namespace pqc::testing {

/// Returns queued responses in order; an entry equal to kTransportFailure throws.
class ScriptedBackend final : public llm::CompletionBackend {
 public:
  static constexpr const char* kTransportFailure = "<transport failure>";

  explicit ScriptedBackend(std::vector<std::string> responses, std::string fallback = {})
      : queue_(responses.begin(), responses.end()), fallback_(std::move(fallback)) {}

  std::string complete(const std::string& prompt) override {
    prompts.push_back(prompt);
    std::string next = fallback_;
    if (!queue_.empty()) {
      next = queue_.front();
      queue_.pop_front();
    }
    if (next == kTransportFailure) throw BackendError("connection reset");
    return next;
  }
  std::string describe() const override { return "scripted"; }

  std::vector<std::string> prompts;

 private:
  std::deque<std::string> queue_;
  std::string fallback_;
};

/// Adapter double backed by a callable over the candidate files.
class LambdaAdapter final : public llm::CheckAdapter {
 public:
  using Fn = std::function<llm::Verdict(const llm::ArtifactPaths&)>;
  explicit LambdaAdapter(Fn fn) : fn_(std::move(fn)) {}
  llm::Verdict check(llm::CheckStage, const llm::ArtifactPaths& paths) override {
    ++calls;
    return fn_(paths);
  }
  int calls = 0;

 private:
  Fn fn_;
};

inline LambdaAdapter passing_adapter(std::optional<double> cp = std::nullopt) {
  return LambdaAdapter([cp](const llm::ArtifactPaths&) {
    auto v = llm::Verdict::pass("ok");
    v.critical_path_ns = cp;
    return v;
  });
}

/// Fails when the file picked by `field` contains `marker`.
inline LambdaAdapter marker_adapter(std::filesystem::path llm::ArtifactPaths::*field,
                                    std::string marker) {
  return LambdaAdapter([field, marker](const llm::ArtifactPaths& p) {
    const std::string text = read_file(p.*field);
    if (text.find(marker) != std::string::npos) {
      return llm::Verdict::fail("found " + marker + " in " + (p.*field).filename().string());
    }
    return llm::Verdict::pass("ok");
  });
}

/// A response carrying all four deliverables for `kernel`.
inline std::string candidate_response(const std::string& kernel, const std::string& tag = "",
                                      bool reads_vectors = true) {
  const std::string vectors = reads_vectors ? kernel + "_vectors.hex" : "other.hex";
  return "Here is the design.\n\n```verilog module\nmodule " + kernel +
         "(input clk, input rst, input start, output valid);\n  // " + tag +
         "\nendmodule\n```\n\n```verilog testbench\nmodule " + kernel +
         "_tb;\n  initial $readmemh(\"" + vectors +
         "\", mem);\nendmodule\n```\n\n```tcl\nipx::package_project -root_dir ip\n```\n\n"
         "```xdc\ncreate_clock -period 5.000 [get_ports clk]\n```\n";
}

}  // namespace pqc::testing
