#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pqc/common/interchange.hpp"
#include "pqc/kernel/kernel_io.hpp"
#include "pqc/llm/adapters.hpp"
#include "pqc/llm/backend.hpp"
#include "pqc/llm/prompt.hpp"

namespace pqc::llm {

enum class SessionState { Generate, SyntaxCheck, FunctionalCheck, TimingCheck, Done, Failed };

std::string_view to_string(SessionState state);

inline constexpr std::size_t kDefaultIterationBudget = 20;
inline constexpr std::size_t kIterationWarningThreshold = 15;

/// One LLM round trip and how far its answer got.
struct TranscriptRecord {
  std::size_t iteration = 0;
  std::string prompt;
  std::string response;
  SessionState stopped_at = SessionState::Generate;  // Done when every check passed
  Verdict verdict;
};

/// The four generated texts plus the vectors they are checked against.
struct ArtifactBundle {
  std::string kernel;
  std::string hdl_module;
  std::string testbench;
  std::string integration_script;  // TCL
  std::string constraints;         // XDC
  std::string vector_file_name;
  std::string vector_file;
  std::string provenance;  // digest of the session transcript
  std::size_t iterations = 0;
};

struct FailureRecord {
  std::string kernel;
  std::string reason;
  std::vector<TranscriptRecord> transcript;
};

using RefinementOutcome = std::variant<ArtifactBundle, FailureRecord>;

/// Splits a response into the four fenced deliverables. Blocks are tagged
/// "```<language> <role>" with role module, testbench, tcl or xdc; an
/// untagged verilog block is the module, or the testbench when it declares
/// a module whose name ends in "_tb". Missing roles come back empty.
struct ResponseArtifacts {
  std::string module;
  std::string testbench;
  std::string tcl;
  std::string xdc;
};
ResponseArtifacts extract_artifacts(std::string_view response);

struct SessionConfig {
  kernel::KernelId kernel = kernel::KernelId::modp_montymul;
  std::size_t budget = kDefaultIterationBudget;
  std::string device{kDefaultDevice};
  std::vector<std::string> objectives = default_objectives();
  std::optional<double> target_critical_path_ns;
  std::size_t vector_count = 64;
  std::uint64_t vector_seed = 1;
  std::filesystem::path work_dir;  // candidates are written here for the adapters
  PromptTemplates templates = PromptTemplates::builtin();
};

struct Adapters {
  CheckAdapter& syntax;
  CheckAdapter& functional;
  CheckAdapter& timing;
};

/// Generate -> SyntaxCheck -> FunctionalCheck -> TimingCheck -> Done. A
/// failed check goes back to Generate with a refinement prompt; running out
/// of budget ends in Failed. Owned by one thread at a time.
class RefinementSession {
 public:
  explicit RefinementSession(SessionConfig config);

  SessionState state() const { return state_; }
  std::size_t iterations_used() const { return iterations_; }
  const std::vector<TranscriptRecord>& transcript() const { return transcript_; }
  const SessionConfig& config() const { return config_; }
  const std::string& vector_file() const { return vectors_; }

  /// Called with warnings (e.g. passing the iteration warning threshold).
  void set_warning_sink(std::function<void(const std::string&)> sink) { warn_ = std::move(sink); }

  /// Drives the session to Done or Failed. Backend errors propagate with the
  /// session intact; calling run again resumes at the same prompt. Adapter
  /// crashes propagate as AdapterCrashError.
  RefinementOutcome run(CompletionBackend& backend, const Adapters& adapters);

 private:
  void step(CompletionBackend& backend, const Adapters& adapters);
  void fail_check(const Verdict& verdict);
  ArtifactPaths write_candidate() const;
  ArtifactBundle make_bundle() const;
  FailureRecord make_failure() const;

  SessionConfig config_;
  SessionState state_ = SessionState::Generate;
  std::size_t iterations_ = 0;
  std::vector<TranscriptRecord> transcript_;
  PromptSpec generation_prompt_;
  std::string next_prompt_;
  std::string response_;
  ResponseArtifacts candidate_;
  std::string vectors_;
  std::function<void(const std::string&)> warn_;
};

RefinementOutcome run_refinement(RefinementSession& session, CompletionBackend& backend,
                                 const Adapters& adapters);

Json to_json(const TranscriptRecord& record);
Json transcript_to_json(const std::vector<TranscriptRecord>& transcript);
std::string transcript_digest(const std::vector<TranscriptRecord>& transcript);

/// Writes module, testbench, TCL, XDC, the vector file and manifest.json
/// into dir. The manifest lists every file with its SHA-256.
void write_bundle(const ArtifactBundle& bundle, const std::filesystem::path& dir,
                  const std::string& template_version);

/// File names used inside a bundle directory.
struct BundleLayout {
  std::string module, testbench, script, constraints;
};
BundleLayout bundle_layout(const std::string& kernel);

}  // namespace pqc::llm
