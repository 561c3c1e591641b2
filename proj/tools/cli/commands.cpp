#include "commands.hpp"

#include <stdlib.h>

#include <algorithm>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "pqc/common/digest.hpp"
#include "pqc/common/error.hpp"
#include "pqc/common/fs.hpp"
#include "pqc/common/interchange.hpp"
#include "pqc/common/rng.hpp"
#include "pqc/kernel/kernel_io.hpp"
#include "pqc/llm/adapters.hpp"
#include "pqc/llm/refinement.hpp"
#include "pqc/profile/flat_profile.hpp"
#include "pqc/sim/pipeline.hpp"

namespace fs = std::filesystem;

namespace pqc::cli {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return kExitUsage;
    case ErrorKind::data: return kExitData;
    case ErrorKind::backend: return kExitBackend;
    case ErrorKind::verification: return kExitVerification;
  }
  return kExitInternal;
}

void Sink::write(const std::string& text) const {
  if (file) {
    if (file->has_parent_path()) fs::create_directories(file->parent_path());
    write_file_atomic(*file, text);
  } else {
    out << text;
  }
}

std::vector<std::string> split_command(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> argv;
  for (std::string word; in >> word;) argv.push_back(word);
  return argv;
}

perf::ReportFormat parse_format(const std::string& text) {
  auto f = perf::parse_report_format(text);
  if (!f) throw UsageError("unknown format '" + text + "' (expected text or machine)");
  return *f;
}

namespace {

/// Prefixes data errors with the file they came from.
template <typename F>
auto with_file(const fs::path& file, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw DataError(file.string() + ": " + e.what());
  } catch (const DataError& e) {
    const std::string what = e.what();
    if (what.rfind(file.string(), 0) == 0) throw;
    throw DataError(file.string() + ": " + what);
  }
}

std::string read_input(const fs::path& file) {
  if (!fs::is_regular_file(file)) throw DataError(file.string() + ": no such file");
  return read_file(file);
}

bool looks_like_document(std::string_view text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string_view::npos && text[pos] == '{';
}

class TempDir {
 public:
  TempDir() {
    std::string pattern = (fs::temp_directory_path() / "pqc-work-XXXXXX").string();
    if (!mkdtemp(pattern.data())) throw DataError("cannot create a temporary directory");
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

/// Answers from scripted files in order (the last one repeats) and records
/// each exchange into a replay store.
class ScriptRecordingBackend final : public llm::CompletionBackend {
 public:
  ScriptRecordingBackend(std::vector<std::string> responses, fs::path store)
      : responses_(std::move(responses)), store_(std::move(store)) {}
  std::string complete(const std::string& prompt) override {
    const std::string& r = responses_[std::min(next_, responses_.size() - 1)];
    ++next_;
    llm::ReplayBackend::record(store_, prompt, r);
    return r;
  }
  std::string describe() const override { return "script recording into " + store_.string(); }

 private:
  std::vector<std::string> responses_;
  fs::path store_;
  std::size_t next_ = 0;
};

}  // namespace

std::unique_ptr<llm::CompletionBackend> make_backend(const BackendOptions& o) {
  const int chosen = (o.replay_dir ? 1 : 0) + (o.endpoint ? 1 : 0) + (o.script.empty() ? 0 : 1);
  if (chosen > 1) throw UsageError("choose one backend: --replay, --endpoint or --script");
  if (o.record_to && o.script.empty()) throw UsageError("--record-to needs --script");
  if (!o.script.empty()) {
    if (!o.record_to) throw UsageError("--script needs --record-to");
    std::vector<std::string> responses;
    for (const auto& f : o.script) responses.push_back(read_input(f));
    return std::make_unique<ScriptRecordingBackend>(std::move(responses), *o.record_to);
  }
  if (o.replay_dir) {
    if (!fs::is_directory(*o.replay_dir)) {
      throw UsageError("replay store " + o.replay_dir->string() + " is not a directory");
    }
    return std::make_unique<llm::ReplayBackend>(*o.replay_dir);
  }
  if (o.endpoint) {
    if (!o.model) throw UsageError("--endpoint needs --model");
    llm::RemoteConfig cfg;
    cfg.endpoint = *o.endpoint;
    cfg.model = *o.model;
    cfg.credential_env = o.credential_env;
    cfg.timeout = std::chrono::seconds(o.timeout_s);
    return std::make_unique<llm::RemoteBackend>(cfg);
  }
  if (o.model) throw UsageError("--model needs --endpoint");
  return nullptr;
}

// ---- profile -------------------------------------------------------------------

profile::HotspotRanking load_ranking(const fs::path& file, std::size_t top,
                                     const std::string& flags) {
  const std::string text = read_input(file);
  profile::HotspotRanking ranking;
  if (looks_like_document(text)) {
    ranking = with_file(file, [&] {
      return profile::ranking_from_json(open_envelope(parse_interchange(text), "ranking"));
    });
    if (top != 0 && ranking.entries.size() > top) ranking.entries.resize(top);
    if (!flags.empty()) ranking.build_flags = flags;
    return ranking;
  }
  auto entries = with_file(file, [&] { return profile::parse_flat_profile(text); });
  if (entries.empty()) throw DataError(file.string() + ": flat profile has no rows");
  const std::size_t k = top == 0 ? entries.size() : top;
  return profile::rank_hotspots(std::move(entries), k, flags);
}

std::string run_profile(const ProfileOptions& o) {
  if (o.top == 0) throw UsageError("--top must be at least 1");
  const auto ranking = load_ranking(o.input, o.top, o.flags);
  if (!o.diff) {
    if (o.format == perf::ReportFormat::text) return profile::render_ranking_text(ranking);
    return dump_interchange(make_envelope("ranking", profile::to_json(ranking)));
  }
  const auto inlined = load_ranking(*o.diff, o.top, o.diff_flags);
  const auto report = profile::diff_inline_views(inlined, ranking);
  if (o.format == perf::ReportFormat::text) {
    return "no-inline view (" + o.input.string() + ")\n" + profile::render_ranking_text(ranking) +
           "\ninlined view (" + o.diff->string() + ")\n" + profile::render_ranking_text(inlined) +
           "\n" + profile::render_exposure_text(report);
  }
  Json data;
  data["noinline"] = profile::to_json(ranking);
  data["inlined"] = profile::to_json(inlined);
  data["exposure"] = profile::to_json(report);
  return dump_interchange(make_envelope("inline-exposure", data));
}

// ---- partition -----------------------------------------------------------------

partition::PartitionReport compute_partition(const PartitionOptions& o,
                                             llm::CompletionBackend* backend) {
  if (!o.profile && !backend) {
    throw UsageError("partition needs a profile (--profile) and/or a backend (--replay or --endpoint)");
  }
  const auto mode = llm::parse_prompt_mode(o.mode);
  if (!mode) throw UsageError("unknown prompt mode '" + o.mode + "' (expected abstract or full-code)");
  const auto normalization = partition::parse_normalization(o.normalization);
  if (!normalization) {
    throw UsageError("unknown normalization '" + o.normalization + "' (expected exact or prefix)");
  }

  partition::CandidateSet profiler_set;
  if (o.profile) {
    const auto ranking = load_ranking(*o.profile, 0, o.flags);
    partition::SelectionPolicy policy;
    policy.top_k = o.top_k;
    policy.threshold_pct = o.threshold_pct;
    if (!policy.top_k && !policy.threshold_pct) policy.top_k = 5;
    if (!o.default_exclusions) policy.exclusions.clear();
    for (const auto& e : o.exclusions) policy.exclusions.push_back(e);
    profiler_set = partition::profiler_guided_partition(ranking, policy);
  }

  partition::CandidateSet llm_set;
  llm_set.path = partition::PartitionPath::source_guided;
  if (backend) {
    if (!o.algorithm) throw UsageError("the source-guided path needs --algorithm");
    std::vector<llm::SourceFile> sources;
    if (o.sources) sources = llm::load_source_bundle(*o.sources);
    const auto templates = o.templates ? llm::PromptTemplates::with_overrides(*o.templates)
                                       : llm::PromptTemplates::builtin();
    llm_set = partition::source_guided_partition(*backend, *o.algorithm, *mode, sources,
                                                 o.function_ids, templates);
  } else if (o.algorithm || o.sources) {
    throw UsageError("--algorithm and --sources need a backend (--replay or --endpoint)");
  }

  std::optional<partition::AgreementReport> agreement;
  if (profiler_set.size() > 0 && llm_set.size() > 0) {
    const std::size_t k = o.agreement_k.value_or(std::min(profiler_set.size(), llm_set.size()));
    agreement = partition::ranking_agreement(profiler_set, llm_set, k, *normalization);
  }
  return partition::emit_partition_report(std::move(profiler_set), std::move(llm_set),
                                          std::move(agreement));
}

std::string render_partition(const partition::PartitionReport& report, perf::ReportFormat format) {
  if (format == perf::ReportFormat::text) return partition::render_partition_text(report);
  return dump_interchange(make_envelope("partition-report", partition::to_json(report)));
}

std::string run_partition(const PartitionOptions& o) {
  auto backend = make_backend(o.backend);
  return render_partition(compute_partition(o, backend.get()), o.format);
}

// ---- generate ------------------------------------------------------------------

GenerateResult run_generate(const GenerateOptions& o, llm::CompletionBackend& backend,
                            std::ostream& err) {
  const auto id = kernel::parse_kernel_id(o.kernel);
  if (!id) throw UsageError("unknown kernel '" + o.kernel + "'");
  if (o.syntax_cmd.empty() || o.functional_cmd.empty() || o.timing_cmd.empty()) {
    throw UsageError("generate needs --syntax-cmd, --functional-cmd and --timing-cmd");
  }
  if (o.output.empty()) throw UsageError("generate needs an output directory (-o)");

  TempDir work;
  llm::SessionConfig cfg;
  cfg.kernel = *id;
  cfg.budget = o.budget;
  if (o.device) cfg.device = *o.device;
  cfg.target_critical_path_ns = o.target_cp_ns;
  cfg.vector_count = o.vector_count;
  cfg.vector_seed = o.seed;
  cfg.work_dir = work.path();
  if (o.templates) cfg.templates = llm::PromptTemplates::with_overrides(*o.templates);
  const std::string template_version = cfg.templates.version();

  const std::chrono::seconds timeout(o.adapter_timeout_s);
  llm::CommandAdapter syntax(o.syntax_cmd, timeout);
  llm::CommandAdapter functional(o.functional_cmd, timeout);
  llm::CommandAdapter timing(o.timing_cmd, timeout);

  llm::RefinementSession session(cfg);
  session.set_warning_sink([&err](const std::string& w) { err << "warning: " << w << "\n"; });
  const auto outcome = session.run(backend, {syntax, functional, timing});

  fs::path staging = o.output;
  staging += ".staging";
  fs::remove_all(staging);
  fs::create_directories(staging);

  Json transcript;
  transcript["kernel"] = o.kernel;
  transcript["state"] = llm::to_string(session.state());
  transcript["iterations"] = session.iterations_used();
  transcript["digest"] = llm::transcript_digest(session.transcript());
  transcript["records"] = llm::transcript_to_json(session.transcript());
  write_file_atomic(staging / "transcript.json",
                    dump_interchange(make_envelope("transcript", transcript)));

  GenerateResult result;
  result.iterations = session.iterations_used();
  if (const auto* bundle = std::get_if<llm::ArtifactBundle>(&outcome)) {
    llm::write_bundle(*bundle, staging, template_version);
    result.done = true;
    result.summary = fmt::format("{}: Done after {} iteration(s), bundle in {}", o.kernel,
                                 result.iterations, o.output.string());
  } else {
    const auto& failure = std::get<llm::FailureRecord>(outcome);
    Json data;
    data["kernel"] = failure.kernel;
    data["reason"] = failure.reason;
    data["iterations"] = failure.transcript.size();
    write_file_atomic(staging / "failure.json", dump_interchange(make_envelope("failure", data)));
    result.summary = fmt::format("{}: Failed, {}", o.kernel, failure.reason);
  }
  if (o.output.has_parent_path()) fs::create_directories(o.output.parent_path());
  replace_directory(staging, o.output);
  return result;
}

// ---- simulate ------------------------------------------------------------------

SimulateResult run_simulate(const SimulateOptions& o) {
  const auto id = kernel::parse_kernel_id(o.kernel);
  if (!id) throw UsageError("unknown kernel '" + o.kernel + "'");
  const auto variant = sim::parse_variant(o.variant);
  if (!variant) throw UsageError("unknown variant '" + o.variant + "' (expected deep or sequential)");
  if (o.vectors && o.random) throw UsageError("use either --vectors or --random, not both");
  if (!o.vectors && !o.random && !o.fixed_latency_trials) {
    throw UsageError("simulate needs --vectors, --random or --check-fixed-latency");
  }
  if (o.random && *o.random == 0) throw UsageError("--random must be at least 1");

  const sim::Calibration calibration =
      o.calibration ? with_file(*o.calibration, [&] { return sim::load_calibration(*o.calibration); })
                    : sim::reference_calibration();
  sim::KernelModel model = calibration.find(*id, *variant);
  model.data_dependent_mutant = o.mutant;

  std::optional<sim::OperandShape> shape;
  if (o.limbs) {
    if (!kernel::is_limb_kernel(*id)) throw UsageError("--limbs applies to the limb kernels only");
    shape = sim::OperandShape{*o.limbs};
  }

  bool passed = true;
  std::string text;
  Json data;
  data["kernel"] = o.kernel;
  data["variant"] = sim::to_string(*variant);

  if (o.vectors || o.random) {
    std::vector<kernel::KernelInput> inputs;
    std::vector<std::optional<kernel::KernelOutput>> expected;
    if (o.vectors) {
      auto file = with_file(*o.vectors,
                            [&] { return kernel::parse_vector_file(read_input(*o.vectors), *id); });
      for (auto& v : file.vectors) {
        inputs.push_back(std::move(v.input));
        expected.emplace_back(std::move(v.expected));
      }
      if (inputs.empty()) throw DataError(o.vectors->string() + ": no vectors");
    } else {
      DeterministicRng rng(o.seed);
      std::optional<std::size_t> limbs;
      if (kernel::is_limb_kernel(*id)) limbs = shape ? shape->limbs : model.reference_shape().limbs;
      for (std::size_t i = 0; i < *o.random; ++i) inputs.push_back(kernel::random_input(*id, rng, limbs));
      expected.resize(inputs.size());
    }

    const auto trace = sim::simulate(model, inputs);
    std::vector<sim::OperandShape> shapes;
    for (const auto& in : inputs) shapes.push_back(sim::shape_of(in));
    const std::uint64_t model_cycles = sim::stream_cycles(model, shapes);

    std::string failures;
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const auto oracle = kernel::evaluate(inputs[i]);
      if (trace.outputs[i] != oracle) {
        ++mismatches;
        failures += fmt::format("mismatch at vector {}: {} -> simulated {}, oracle {}\n", i,
                                kernel::describe(inputs[i]), kernel::describe(trace.outputs[i]),
                                kernel::describe(oracle));
      } else if (expected[i] && *expected[i] != oracle) {
        ++mismatches;
        failures += fmt::format("mismatch at vector {}: {} -> file expects {}, oracle {}\n", i,
                                kernel::describe(inputs[i]), kernel::describe(*expected[i]),
                                kernel::describe(oracle));
      }
    }
    const bool cycles_ok = trace.total_cycles == model_cycles;
    if (!cycles_ok) {
      failures += fmt::format("cycle mismatch: simulated {}, calibrated model {}\n",
                              trace.total_cycles, model_cycles);
    }
    const bool ok = mismatches == 0 && cycles_ok;
    passed = passed && ok;
    text += failures;
    text += fmt::format("kernel={} variant={} inputs={} cycles={} {}\n", o.kernel,
                        sim::to_string(*variant), inputs.size(), trace.total_cycles,
                        ok ? "PASS" : "FAIL");
    if (o.trace) {
      if (o.trace->has_parent_path()) fs::create_directories(o.trace->parent_path());
      write_file_atomic(*o.trace, sim::export_trace(trace));
    }
    data["inputs"] = inputs.size();
    data["cycles"] = trace.total_cycles;
    data["model_cycles"] = model_cycles;
    data["mismatches"] = mismatches;
    data["passed"] = ok;
  }

  if (o.fixed_latency_trials) {
    const auto v = sim::check_fixed_latency(model, *o.fixed_latency_trials, o.seed, shape);
    passed = passed && v.passed;
    text += fmt::format("fixed-latency kernel={} variant={} trials={} cycles={{{}}} {}\n", o.kernel,
                        sim::to_string(*variant), v.trials, fmt::join(v.distinct_cycles, ","),
                        v.passed ? "PASS" : "FAIL");
    Json f;
    f["trials"] = v.trials;
    f["distinct_cycles"] = v.distinct_cycles;
    f["passed"] = v.passed;
    data["fixed_latency"] = f;
  }

  if (o.format == perf::ReportFormat::machine) {
    data["passed_all"] = passed;
    text = dump_interchange(make_envelope("simulation", data));
  }
  return {passed, text};
}

// ---- report --------------------------------------------------------------------

std::string run_report(const fs::path& input, perf::ReportFormat format) {
  const std::string text = read_input(input);
  const auto set = with_file(input, [&] {
    return looks_like_document(text) ? perf::parse_machine_report(text) : perf::parse_records(text);
  });
  return perf::render_report(set, format);
}

}  // namespace pqc::cli
