#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pqc/kernel/kernel_io.hpp"

namespace pqc::llm {

enum class PromptKind { ranking, generation, refinement };
enum class PromptMode { abstract, full_code };

std::string_view to_string(PromptKind kind);
std::string_view to_string(PromptMode mode);
std::optional<PromptMode> parse_prompt_mode(std::string_view text);

inline constexpr std::string_view kDefaultDevice = "Zynq UltraScale+ MPSoC ZCU104";

/// Objectives used when the caller does not supply any.
std::vector<std::string> default_objectives();

struct SourceFile {
  std::string path;  // relative to the bundle root
  std::string text;
};

/// Loads every regular file under dir, sorted by relative path.
std::vector<SourceFile> load_source_bundle(const std::filesystem::path& dir);

struct PromptSpec {
  PromptKind kind = PromptKind::ranking;
  std::string algorithm_or_kernel;
  std::string target_device{kDefaultDevice};
  std::vector<std::string> objectives;
  std::string body;
};

/// Prompt templates with {{name}} placeholders. The built-in set is compiled
/// in; a directory may override any of ranking.tmpl, generation.tmpl and
/// refinement.tmpl.
class PromptTemplates {
 public:
  static PromptTemplates builtin();
  static PromptTemplates with_overrides(const std::filesystem::path& dir);

  const std::string& get(PromptKind kind) const;
  /// Version tag: "builtin-<n>" or the digest of the overriding files.
  const std::string& version() const { return version_; }

  /// Substitutes every {{key}}; an unknown placeholder throws DataError.
  static std::string render(std::string_view tmpl, const std::map<std::string, std::string>& vars);

 private:
  std::map<PromptKind, std::string> text_;
  std::string version_;
};

/// Ranking prompt for the source-guided partitioning path. Abstract mode
/// embeds identifiers only; full-code mode embeds every source file and
/// throws UsageError when there are none.
PromptSpec build_ranking_prompt(const std::string& algorithm_id, PromptMode mode,
                                const std::vector<SourceFile>& sources = {},
                                const std::vector<std::string>& function_ids = {},
                                const PromptTemplates& templates = PromptTemplates::builtin());

/// Generation prompt for one kernel. kernel_spec is the reference source of
/// the kernel; vector_file is the file name the testbench must read.
PromptSpec build_generation_prompt(const std::string& kernel_name, const std::string& kernel_spec,
                                   const std::string& device,
                                   const std::vector<std::string>& objectives,
                                   const std::string& vector_file,
                                   const PromptTemplates& templates = PromptTemplates::builtin());

/// Follow-up prompt after a failed check. Embeds the original request, the
/// previous response and the checker's verdict.
PromptSpec build_refinement_prompt(const PromptSpec& generation, const std::string& failed_stage,
                                   const std::string& verdict_text,
                                   const std::string& previous_response,
                                   const PromptTemplates& templates = PromptTemplates::builtin());

/// Reference C source shipped for each accelerated kernel.
std::string kernel_reference_source(kernel::KernelId id);

}  // namespace pqc::llm
