#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace pqc {

struct ProcessResult {
  enum class Status { exited, signaled, timed_out, spawn_failed };
  Status status = Status::spawn_failed;
  int exit_code = -1;  // valid when status == exited
  std::string out;     // captured standard output
};

/// Runs argv[0] (PATH lookup) with the remaining arguments, capturing stdout.
/// stderr is inherited. The child is killed when the timeout expires.
ProcessResult run_process(const std::vector<std::string>& argv, std::chrono::milliseconds timeout);

}  // namespace pqc
