#pragma once

// Subcommand implementations shared by the argument parser and run-all.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pqc/llm/backend.hpp"
#include "pqc/partition/partition.hpp"
#include "pqc/perf/report.hpp"
#include "pqc/profile/ranking.hpp"

namespace pqc::cli {

/// Process exit statuses.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitData = 3,
  kExitBackend = 4,
  kExitVerification = 5,
  kExitBudget = 6,
};

int exit_code_for(ErrorKind kind);

/// Where text or machine output goes: a file when set, the stream otherwise.
struct Sink {
  std::ostream& out;
  std::optional<std::filesystem::path> file;
  void write(const std::string& text) const;
};

// ---- backend -----------------------------------------------------------------

struct BackendOptions {
  std::optional<std::filesystem::path> replay_dir;
  std::optional<std::string> endpoint;
  std::optional<std::string> model;
  std::string credential_env = "OPENAI_API_KEY";
  int timeout_s = 60;
  // Fixture authoring: answer from these files in order, recording every
  // prompt/response pair into record_to.
  std::vector<std::filesystem::path> script;
  std::optional<std::filesystem::path> record_to;
};

/// Null when no backend is configured. Conflicting settings throw UsageError.
std::unique_ptr<llm::CompletionBackend> make_backend(const BackendOptions& options);

// ---- profile -------------------------------------------------------------------

/// A gprof report, or a ranking document written by `profile --format machine`.
profile::HotspotRanking load_ranking(const std::filesystem::path& file, std::size_t top,
                                     const std::string& flags);

struct ProfileOptions {
  std::filesystem::path input;
  std::size_t top = 5;
  std::string flags;
  std::optional<std::filesystem::path> diff;  // the inlined view
  std::string diff_flags;
  perf::ReportFormat format = perf::ReportFormat::text;
};

std::string run_profile(const ProfileOptions& options);

// ---- partition -----------------------------------------------------------------

struct PartitionOptions {
  std::optional<std::filesystem::path> profile;  // gprof or ranking document
  std::string flags;
  std::optional<std::size_t> top_k;
  std::optional<double> threshold_pct;
  std::vector<std::string> exclusions;
  bool default_exclusions = true;
  std::string mode = "abstract";
  std::optional<std::string> algorithm;
  std::optional<std::filesystem::path> sources;
  std::vector<std::string> function_ids;
  std::optional<std::filesystem::path> templates;
  std::optional<std::size_t> agreement_k;
  std::string normalization = "exact";
  BackendOptions backend;
  perf::ReportFormat format = perf::ReportFormat::text;
};

partition::PartitionReport compute_partition(const PartitionOptions& options,
                                             llm::CompletionBackend* backend);
std::string render_partition(const partition::PartitionReport& report, perf::ReportFormat format);
std::string run_partition(const PartitionOptions& options);

// ---- generate ------------------------------------------------------------------

struct GenerateOptions {
  std::string kernel;
  std::size_t budget = 20;
  std::vector<std::string> syntax_cmd;
  std::vector<std::string> functional_cmd;
  std::vector<std::string> timing_cmd;
  int adapter_timeout_s = 300;
  std::optional<double> target_cp_ns;
  std::size_t vector_count = 64;
  std::uint64_t seed = 1;
  std::optional<std::string> device;
  std::optional<std::filesystem::path> templates;
  std::filesystem::path output;
  BackendOptions backend;
};

struct GenerateResult {
  bool done = false;
  std::size_t iterations = 0;
  std::string summary;  // one line for the console
};

/// Writes the bundle (or failure record) plus transcript.json into
/// options.output. Warnings go to err.
GenerateResult run_generate(const GenerateOptions& options, llm::CompletionBackend& backend,
                            std::ostream& err);

// ---- simulate ------------------------------------------------------------------

struct SimulateOptions {
  std::string kernel;
  std::string variant = "deep";
  std::optional<std::filesystem::path> vectors;
  std::optional<std::size_t> random;
  std::uint64_t seed = 1;
  std::optional<std::size_t> limbs;
  std::optional<std::filesystem::path> calibration;
  std::optional<std::size_t> fixed_latency_trials;
  bool mutant = false;
  std::optional<std::filesystem::path> trace;
  perf::ReportFormat format = perf::ReportFormat::text;
};

struct SimulateResult {
  bool passed = false;
  std::string text;
};

SimulateResult run_simulate(const SimulateOptions& options);

// ---- report --------------------------------------------------------------------

std::string run_report(const std::filesystem::path& input, perf::ReportFormat format);

// ---- run-all -------------------------------------------------------------------

struct RunAllOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> output;  // overrides the config
};

/// Runs every stage into a staging directory and swaps it in on success.
/// Diagnostics are tagged with the failing stage; returns the exit status.
int run_all(const RunAllOptions& options, std::ostream& out, std::ostream& err);

// ---- helpers -------------------------------------------------------------------

std::vector<std::string> split_command(const std::string& text);
perf::ReportFormat parse_format(const std::string& text);

}  // namespace pqc::cli
