#include "pqc/llm/prompt.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "pqc/common/digest.hpp"
#include "pqc/common/error.hpp"
#include "pqc/common/fs.hpp"
#include "pqc/llm/assets.hpp"

namespace pqc::llm {

namespace fs = std::filesystem;

std::string_view to_string(PromptKind kind) {
  switch (kind) {
    case PromptKind::ranking:
      return "ranking";
    case PromptKind::generation:
      return "generation";
    case PromptKind::refinement:
      return "refinement";
  }
  return "unknown";
}

std::string_view to_string(PromptMode mode) {
  return mode == PromptMode::abstract ? "abstract" : "full-code";
}

std::optional<PromptMode> parse_prompt_mode(std::string_view text) {
  if (text == "abstract") return PromptMode::abstract;
  if (text == "full-code") return PromptMode::full_code;
  return std::nullopt;
}

std::vector<std::string> default_objectives() {
  return {"fully pipelined datapath that accepts a new input every clock cycle",
          "map every multiplication onto DSP48E2 primitives"};
}

std::vector<SourceFile> load_source_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw DataError("source bundle " + dir.string() + " is not a directory");
  }
  std::vector<SourceFile> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    files.push_back({fs::relative(entry.path(), dir).generic_string(), read_file(entry.path())});
  }
  std::sort(files.begin(), files.end(),
            [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
  return files;
}

namespace {

constexpr const char* kTemplateFiles[] = {"ranking.tmpl", "generation.tmpl", "refinement.tmpl"};
constexpr PromptKind kTemplateKinds[] = {PromptKind::ranking, PromptKind::generation,
                                         PromptKind::refinement};

}  // namespace

PromptTemplates PromptTemplates::builtin() {
  PromptTemplates t;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto text = embedded_asset(std::string("templates/") + kTemplateFiles[i]);
    if (!text) throw DataError(std::string("missing built-in template ") + kTemplateFiles[i]);
    t.text_[kTemplateKinds[i]] = std::string(*text);
  }
  t.version_ = "builtin-1";
  return t;
}

PromptTemplates PromptTemplates::with_overrides(const fs::path& dir) {
  PromptTemplates t = builtin();
  std::string overridden;
  for (std::size_t i = 0; i < 3; ++i) {
    const fs::path file = dir / kTemplateFiles[i];
    if (fs::exists(file)) {
      t.text_[kTemplateKinds[i]] = read_file(file);
      overridden += std::string(kTemplateFiles[i]) + "\n" + t.text_[kTemplateKinds[i]];
    }
  }
  if (!overridden.empty()) t.version_ = "override-" + sha256_hex(overridden).substr(0, 16);
  return t;
}

const std::string& PromptTemplates::get(PromptKind kind) const { return text_.at(kind); }

std::string PromptTemplates::render(std::string_view tmpl,
                                    const std::map<std::string, std::string>& vars) {
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    const std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw DataError("unterminated placeholder in prompt template");
    }
    out.append(tmpl.substr(pos, open - pos));
    const std::string key(tmpl.substr(open + 2, close - open - 2));
    const auto it = vars.find(key);
    if (it == vars.end()) {
      throw DataError("unknown placeholder {{" + key + "}} in prompt template");
    }
    out += it->second;
    pos = close + 2;
  }
  return out;
}

PromptSpec build_ranking_prompt(const std::string& algorithm_id, PromptMode mode,
                                const std::vector<SourceFile>& sources,
                                const std::vector<std::string>& function_ids,
                                const PromptTemplates& templates) {
  if (algorithm_id.empty()) {
    throw UsageError("ranking prompt needs an algorithm identifier");
  }
  std::map<std::string, std::string> vars;
  vars["algorithm"] = algorithm_id;
  vars["identifiers"] =
      function_ids.empty() ? "" : fmt::format("Functions: {}\n", fmt::join(function_ids, ", "));
  if (mode == PromptMode::full_code) {
    if (sources.empty()) {
      throw UsageError("full-code ranking prompt needs at least one source file");
    }
    vars["source_note"] = fmt::format("provided below ({} file{})", sources.size(),
                                      sources.size() == 1 ? "" : "s");
    std::string block;
    for (const auto& f : sources) {
      block += fmt::format("\n=== file: {} ===\n{}", f.path, f.text);
      if (!f.text.empty() && f.text.back() != '\n') block += '\n';
    }
    vars["sources"] = block;
  } else {
    vars["source_note"] = "not provided; reason from the identifiers above";
    vars["sources"] = "";
  }
  PromptSpec spec;
  spec.kind = PromptKind::ranking;
  spec.algorithm_or_kernel = algorithm_id;
  spec.body = PromptTemplates::render(templates.get(PromptKind::ranking), vars);
  return spec;
}

PromptSpec build_generation_prompt(const std::string& kernel_name, const std::string& kernel_spec,
                                   const std::string& device,
                                   const std::vector<std::string>& objectives,
                                   const std::string& vector_file,
                                   const PromptTemplates& templates) {
  if (kernel_spec.empty()) {
    throw UsageError("generation prompt needs a nonempty kernel specification");
  }
  if (device.empty()) {
    throw UsageError("generation prompt needs a target device");
  }
  std::string objective_block;
  if (!objectives.empty()) {
    objective_block = "Objectives:\n";
    for (const auto& o : objectives) objective_block += "- " + o + "\n";
  }
  std::map<std::string, std::string> vars{{"kernel", kernel_name},
                                          {"kernel_spec", kernel_spec},
                                          {"device", device},
                                          {"objectives", objective_block},
                                          {"vector_file", vector_file}};
  PromptSpec spec;
  spec.kind = PromptKind::generation;
  spec.algorithm_or_kernel = kernel_name;
  spec.target_device = device;
  spec.objectives = objectives;
  spec.body = PromptTemplates::render(templates.get(PromptKind::generation), vars);
  return spec;
}

PromptSpec build_refinement_prompt(const PromptSpec& generation, const std::string& failed_stage,
                                   const std::string& verdict_text,
                                   const std::string& previous_response,
                                   const PromptTemplates& templates) {
  std::map<std::string, std::string> vars{
      {"kernel", generation.algorithm_or_kernel},
      {"stage", failed_stage},
      {"verdict", verdict_text.empty() ? "(no output)" : verdict_text},
      {"previous_response", previous_response},
      {"original", generation.body}};
  PromptSpec spec = generation;
  spec.kind = PromptKind::refinement;
  spec.body = PromptTemplates::render(templates.get(PromptKind::refinement), vars);
  return spec;
}

std::string kernel_reference_source(kernel::KernelId id) {
  const auto text = embedded_asset("kernels/" + std::string(kernel::to_string(id)) + ".c");
  if (!text) {
    throw DataError("no reference source for " + std::string(kernel::to_string(id)));
  }
  return std::string(*text);
}

}  // namespace pqc::llm
