#include "pqc/llm/refinement.hpp"

#include <cstdlib>
#include <iostream>
#include <regex>

#include <fmt/format.h>

#include "pqc/common/digest.hpp"
#include "pqc/common/fs.hpp"
#include "pqc/llm/vectors.hpp"

namespace pqc::llm {

namespace fs = std::filesystem;

std::string_view to_string(SessionState state) {
  switch (state) {
    case SessionState::Generate:
      return "Generate";
    case SessionState::SyntaxCheck:
      return "SyntaxCheck";
    case SessionState::FunctionalCheck:
      return "FunctionalCheck";
    case SessionState::TimingCheck:
      return "TimingCheck";
    case SessionState::Done:
      return "Done";
    case SessionState::Failed:
      return "Failed";
  }
  return "unknown";
}

BundleLayout bundle_layout(const std::string& kernel) {
  return {kernel + ".v", kernel + "_tb.v", "package_ip.tcl", kernel + ".xdc"};
}

ResponseArtifacts extract_artifacts(std::string_view response) {
  ResponseArtifacts out;
  static const std::regex tb_module(R"(\bmodule\s+\w*_tb\b)");
  auto assign = [&](std::string& slot, std::string text) {
    if (slot.empty()) slot = std::move(text);
  };
  std::size_t pos = 0;
  bool in_block = false;
  std::string lang, role, body;
  while (pos < response.size()) {
    const std::size_t nl = response.find('\n', pos);
    std::string_view line =
        response.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? response.size() : nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const bool fence = line.substr(0, 3) == "```";
    if (!in_block) {
      if (!fence) continue;
      in_block = true;
      body.clear();
      std::string info(line.substr(3));
      for (auto& c : info) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      const auto sp = info.find(' ');
      lang = info.substr(0, sp);
      role = sp == std::string::npos ? "" : info.substr(info.find_first_not_of(' ', sp));
      continue;
    }
    if (fence) {
      in_block = false;
      if (role.empty()) {
        if (lang == "tcl" || lang == "xdc") {
          role = lang;
        } else if (lang == "verilog" || lang == "systemverilog" || lang == "v") {
          role = std::regex_search(body, tb_module) ? "testbench" : "module";
        }
      }
      if (role == "module") assign(out.module, body);
      else if (role == "testbench") assign(out.testbench, body);
      else if (role == "tcl") assign(out.tcl, body);
      else if (role == "xdc") assign(out.xdc, body);
      continue;
    }
    body.append(line);
    body.push_back('\n');
  }
  return out;
}

// ---------------------------------------------------------------------------

RefinementSession::RefinementSession(SessionConfig config) : config_(std::move(config)) {
  if (config_.budget == 0) {
    throw UsageError("iteration budget must be at least 1");
  }
  const std::string kernel(kernel::to_string(config_.kernel));
  vectors_ = emit_test_vectors(config_.kernel, config_.vector_count, config_.vector_seed);
  generation_prompt_ = build_generation_prompt(kernel, kernel_reference_source(config_.kernel),
                                               config_.device, config_.objectives,
                                               vector_file_name(config_.kernel), config_.templates);
  next_prompt_ = generation_prompt_.body;
  if (config_.work_dir.empty()) {
    std::string tmpl = (fs::temp_directory_path() / "pqc-session-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr) {
      throw DataError("cannot create a session work directory");
    }
    config_.work_dir = tmpl;
  }
  warn_ = [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; };
}

RefinementOutcome RefinementSession::run(CompletionBackend& backend, const Adapters& adapters) {
  while (state_ != SessionState::Done && state_ != SessionState::Failed) {
    step(backend, adapters);
  }
  if (state_ == SessionState::Done) return make_bundle();
  return make_failure();
}

RefinementOutcome run_refinement(RefinementSession& session, CompletionBackend& backend,
                                 const Adapters& adapters) {
  return session.run(backend, adapters);
}

void RefinementSession::fail_check(const Verdict& verdict) {
  auto& record = transcript_.back();
  record.stopped_at = state_;
  record.verdict = verdict;
  const std::string stage = state_ == SessionState::SyntaxCheck       ? "syntax"
                            : state_ == SessionState::FunctionalCheck ? "functional"
                                                                      : "timing";
  next_prompt_ = build_refinement_prompt(generation_prompt_, stage, verdict.text, response_,
                                         config_.templates)
                     .body;
  state_ = SessionState::Generate;
}

void RefinementSession::step(CompletionBackend& backend, const Adapters& adapters) {
  switch (state_) {
    case SessionState::Generate: {
      if (iterations_ >= config_.budget) {
        state_ = SessionState::Failed;
        return;
      }
      // The backend call comes first so a transport failure leaves no trace.
      std::string response = backend.complete(next_prompt_);
      ++iterations_;
      if (iterations_ == kIterationWarningThreshold + 1) {
        warn_(fmt::format("{}: session passed {} iterations", kernel::to_string(config_.kernel),
                          kIterationWarningThreshold));
      }
      response_ = std::move(response);
      candidate_ = extract_artifacts(response_);
      transcript_.push_back({iterations_, next_prompt_, response_, SessionState::Generate, {}});
      state_ = SessionState::SyntaxCheck;
      return;
    }
    case SessionState::SyntaxCheck: {
      std::vector<std::string> missing;
      if (candidate_.module.empty()) missing.push_back("module");
      if (candidate_.testbench.empty()) missing.push_back("testbench");
      if (candidate_.tcl.empty()) missing.push_back("tcl");
      if (candidate_.xdc.empty()) missing.push_back("xdc");
      if (!missing.empty()) {
        fail_check(Verdict::fail(
            fmt::format("response is missing deliverable(s): {}", fmt::join(missing, ", "))));
        return;
      }
      const Verdict v = adapters.syntax.check(CheckStage::syntax, write_candidate());
      if (!v.passed) {
        fail_check(v);
        return;
      }
      state_ = SessionState::FunctionalCheck;
      return;
    }
    case SessionState::FunctionalCheck: {
      const std::string vector_name = vector_file_name(config_.kernel);
      if (candidate_.testbench.find(vector_name) == std::string::npos) {
        fail_check(Verdict::fail("testbench does not read the vector file " + vector_name));
        return;
      }
      const Verdict v = adapters.functional.check(CheckStage::functional, write_candidate());
      if (!v.passed) {
        fail_check(v);
        return;
      }
      state_ = SessionState::TimingCheck;
      return;
    }
    case SessionState::TimingCheck: {
      Verdict v = adapters.timing.check(CheckStage::timing, write_candidate());
      if (v.passed && config_.target_critical_path_ns) {
        const double target = *config_.target_critical_path_ns;
        if (!v.critical_path_ns) {
          v.passed = false;
          v.text += "\ntiming adapter reported no critical-path estimate";
        } else if (*v.critical_path_ns > target) {
          v.passed = false;
          v.text += fmt::format("\ncritical path {} ns exceeds the {} ns target",
                                *v.critical_path_ns, target);
        }
      }
      if (!v.passed) {
        fail_check(v);
        return;
      }
      transcript_.back().stopped_at = SessionState::Done;
      transcript_.back().verdict = v;
      state_ = SessionState::Done;
      return;
    }
    case SessionState::Done:
    case SessionState::Failed:
      return;
  }
}

ArtifactPaths RefinementSession::write_candidate() const {
  const std::string kernel(kernel::to_string(config_.kernel));
  const auto layout = bundle_layout(kernel);
  const fs::path dir = config_.work_dir;
  write_file_atomic(dir / layout.module, candidate_.module);
  write_file_atomic(dir / layout.testbench, candidate_.testbench);
  write_file_atomic(dir / layout.script, candidate_.tcl);
  write_file_atomic(dir / layout.constraints, candidate_.xdc);
  write_file_atomic(dir / vector_file_name(config_.kernel), vectors_);
  return {dir / layout.module, dir / layout.testbench, dir / layout.script,
          dir / layout.constraints, dir / vector_file_name(config_.kernel)};
}

ArtifactBundle RefinementSession::make_bundle() const {
  ArtifactBundle b;
  b.kernel = std::string(kernel::to_string(config_.kernel));
  b.hdl_module = candidate_.module;
  b.testbench = candidate_.testbench;
  b.integration_script = candidate_.tcl;
  b.constraints = candidate_.xdc;
  b.vector_file_name = vector_file_name(config_.kernel);
  b.vector_file = vectors_;
  b.provenance = transcript_digest(transcript_);
  b.iterations = iterations_;
  return b;
}

FailureRecord RefinementSession::make_failure() const {
  return {std::string(kernel::to_string(config_.kernel)),
          fmt::format("iteration budget of {} exhausted", config_.budget), transcript_};
}

// ---------------------------------------------------------------------------

Json to_json(const TranscriptRecord& r) {
  Json j;
  j["iteration"] = r.iteration;
  j["prompt_digest"] = prompt_digest(r.prompt);
  j["stopped_at"] = to_string(r.stopped_at);
  j["verdict"] = {{"passed", r.verdict.passed},
                  {"text", r.verdict.text},
                  {"critical_path_ns",
                   r.verdict.critical_path_ns ? Json(*r.verdict.critical_path_ns) : Json()}};
  j["prompt"] = r.prompt;
  j["response"] = r.response;
  return j;
}

Json transcript_to_json(const std::vector<TranscriptRecord>& transcript) {
  Json records = Json::array();
  for (const auto& r : transcript) records.push_back(to_json(r));
  return records;
}

std::string transcript_digest(const std::vector<TranscriptRecord>& transcript) {
  return sha256_hex(transcript_to_json(transcript).dump());
}

void write_bundle(const ArtifactBundle& bundle, const fs::path& dir,
                  const std::string& template_version) {
  const auto layout = bundle_layout(bundle.kernel);
  const std::pair<const char*, std::pair<std::string, const std::string*>> files[] = {
      {"module", {layout.module, &bundle.hdl_module}},
      {"testbench", {layout.testbench, &bundle.testbench}},
      {"integration_script", {layout.script, &bundle.integration_script}},
      {"constraints", {layout.constraints, &bundle.constraints}},
      {"vectors", {bundle.vector_file_name, &bundle.vector_file}},
  };
  Json manifest;
  manifest["kernel"] = bundle.kernel;
  manifest["iterations"] = bundle.iterations;
  manifest["template_version"] = template_version;
  manifest["provenance"] = bundle.provenance;
  manifest["files"] = Json::array();
  for (const auto& [role, file] : files) {
    write_file_atomic(dir / file.first, *file.second);
    manifest["files"].push_back(
        {{"role", role}, {"path", file.first}, {"sha256", sha256_hex(*file.second)}});
  }
  write_file_atomic(dir / "manifest.json",
                    dump_interchange(make_envelope("bundle-manifest", manifest)));
}

}  // namespace pqc::llm
