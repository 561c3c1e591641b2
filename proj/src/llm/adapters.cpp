#include "pqc/llm/adapters.hpp"

#include <charconv>

#include "pqc/common/process.hpp"

namespace pqc::llm {

std::string_view to_string(CheckStage stage) {
  switch (stage) {
    case CheckStage::syntax:
      return "syntax";
    case CheckStage::functional:
      return "functional";
    case CheckStage::timing:
      return "timing";
  }
  return "unknown";
}

std::optional<double> parse_critical_path(std::string_view text) {
  constexpr std::string_view key = "critical_path_ns=";
  const auto pos = text.find(key);
  if (pos == std::string_view::npos) return std::nullopt;
  const char* begin = text.data() + pos + key.size();
  const char* end = text.data() + text.size();
  double v = 0;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr == begin) return std::nullopt;
  return v;
}

CommandAdapter::CommandAdapter(std::vector<std::string> argv, std::chrono::milliseconds timeout)
    : argv_(std::move(argv)), timeout_(timeout) {
  if (argv_.empty()) {
    throw UsageError("adapter command is empty");
  }
}

Verdict CommandAdapter::check(CheckStage stage, const ArtifactPaths& paths) {
  std::vector<std::string> argv = argv_;
  for (const auto* p : {&paths.module, &paths.testbench, &paths.script, &paths.constraints,
                        &paths.vectors}) {
    argv.push_back(p->string());
  }
  const ProcessResult r = run_process(argv, timeout_);
  switch (r.status) {
    case ProcessResult::Status::spawn_failed:
      throw AdapterCrashError(stage, "could not start '" + argv_.front() + "'");
    case ProcessResult::Status::timed_out:
      throw AdapterCrashError(stage, "'" + argv_.front() + "' timed out");
    case ProcessResult::Status::signaled:
      throw AdapterCrashError(stage, "'" + argv_.front() + "' was killed by a signal");
    case ProcessResult::Status::exited:
      break;
  }
  Verdict v{r.exit_code == 0, r.out, parse_critical_path(r.out)};
  return v;
}

}  // namespace pqc::llm
