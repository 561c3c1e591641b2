#include <algorithm>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "commands.hpp"
#include "pqc/common/digest.hpp"
#include "pqc/common/error.hpp"
#include "pqc/common/fs.hpp"
#include "pqc/common/interchange.hpp"
#include "pqc/kernel/kernel_io.hpp"
#include "pqc/sim/pipeline.hpp"

namespace fs = std::filesystem;

namespace pqc::cli {

namespace {

/// Parsed run-config document. Relative paths are resolved against the
/// directory holding the config file.
struct RunConfig {
  fs::path base;
  std::optional<fs::path> profile;
  std::string build_flags;
  std::optional<fs::path> inlined_profile;
  std::string inlined_build_flags;
  std::optional<fs::path> sources;
  std::optional<std::string> algorithm;
  std::optional<fs::path> output;
  BackendOptions backend;
  PartitionOptions partition;
  GenerateOptions generate;
  SimulateOptions simulate;
  std::size_t fixed_latency_trials = 0;
  std::optional<fs::path> records;
  std::string report_format = "both";
  std::optional<fs::path> templates;
};

void check_keys(const Json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw UsageError(fmt::format("config: {} must be an object", where));
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw UsageError(fmt::format("config: unknown key '{}' in {}", key, where));
    }
  }
}

template <typename T>
std::optional<T> opt(const Json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return obj.at(key).get<T>();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::vector<std::string> resolve_argv(const fs::path& base, std::vector<std::string> argv) {
  if (!argv.empty() && argv[0].find('/') != std::string::npos) argv[0] = resolve(base, argv[0]).string();
  return argv;
}

RunConfig parse_run_config(const fs::path& file) {
  if (!fs::is_regular_file(file)) throw UsageError("config " + file.string() + " not found");
  const Json data = [&] {
    try {
      return open_envelope(parse_interchange(read_file(file)), "run-config");
    } catch (const DataError& e) {
      throw UsageError(file.string() + ": " + e.what());
    }
  }();
  RunConfig c;
  c.base = fs::absolute(file).parent_path();
  try {
    check_keys(data, "config", {"profile", "build_flags", "inlined_profile", "inlined_build_flags",
                                "sources", "algorithm", "output", "templates", "backend",
                                "partition", "generate", "simulate", "report"});
    auto path_of = [&](const Json& obj, const char* key) -> std::optional<fs::path> {
      if (auto s = opt<std::string>(obj, key)) return resolve(c.base, *s);
      return std::nullopt;
    };
    c.profile = path_of(data, "profile");
    c.build_flags = opt<std::string>(data, "build_flags").value_or("");
    c.inlined_profile = path_of(data, "inlined_profile");
    c.inlined_build_flags = opt<std::string>(data, "inlined_build_flags").value_or("");
    c.sources = path_of(data, "sources");
    c.algorithm = opt<std::string>(data, "algorithm");
    c.output = path_of(data, "output");
    c.templates = path_of(data, "templates");

    if (data.contains("backend")) {
      const Json& b = data.at("backend");
      check_keys(b, "backend", {"mode", "store", "endpoint", "model", "credential_env", "timeout_s"});
      const auto mode = opt<std::string>(b, "mode").value_or("");
      if (mode == "replay") {
        c.backend.replay_dir = path_of(b, "store");
        if (!c.backend.replay_dir) throw UsageError("config: replay mode needs backend.store");
      } else if (mode == "remote") {
        c.backend.endpoint = opt<std::string>(b, "endpoint");
        c.backend.model = opt<std::string>(b, "model");
        const auto cred = opt<std::string>(b, "credential_env");
        if (!c.backend.endpoint || !cred) {
          throw UsageError("config: remote mode needs backend.endpoint and backend.credential_env");
        }
        c.backend.credential_env = *cred;
        c.backend.timeout_s = opt<int>(b, "timeout_s").value_or(60);
      } else {
        throw UsageError("config: backend.mode must be replay or remote");
      }
    }

    const Json empty = Json::object();
    const Json& p = data.contains("partition") ? data.at("partition") : empty;
    check_keys(p, "partition", {"top_k", "threshold_pct", "exclusions", "default_exclusions", "mode",
                                "normalization", "agreement_k", "function_ids"});
    c.partition.profile = c.profile;
    c.partition.flags = c.build_flags;
    c.partition.top_k = opt<std::size_t>(p, "top_k");
    c.partition.threshold_pct = opt<double>(p, "threshold_pct");
    c.partition.exclusions = opt<std::vector<std::string>>(p, "exclusions").value_or(std::vector<std::string>{});
    c.partition.default_exclusions = opt<bool>(p, "default_exclusions").value_or(true);
    c.partition.mode = opt<std::string>(p, "mode").value_or("abstract");
    c.partition.normalization = opt<std::string>(p, "normalization").value_or("exact");
    c.partition.agreement_k = opt<std::size_t>(p, "agreement_k");
    c.partition.function_ids = opt<std::vector<std::string>>(p, "function_ids").value_or(std::vector<std::string>{});
    c.partition.algorithm = c.algorithm;
    c.partition.sources = c.sources;
    c.partition.templates = c.templates;

    const Json& g = data.contains("generate") ? data.at("generate") : empty;
    check_keys(g, "generate", {"budget", "vector_count", "seed", "target_cp_ns", "device",
                               "adapter_timeout_s", "adapters"});
    c.generate.budget = opt<std::size_t>(g, "budget").value_or(20);
    c.generate.vector_count = opt<std::size_t>(g, "vector_count").value_or(64);
    c.generate.seed = opt<std::uint64_t>(g, "seed").value_or(1);
    c.generate.target_cp_ns = opt<double>(g, "target_cp_ns");
    c.generate.device = opt<std::string>(g, "device");
    c.generate.adapter_timeout_s = opt<int>(g, "adapter_timeout_s").value_or(300);
    c.generate.templates = c.templates;
    if (g.contains("adapters")) {
      const Json& a = g.at("adapters");
      check_keys(a, "generate.adapters", {"syntax", "functional", "timing"});
      auto argv = [&](const char* key) {
        return resolve_argv(c.base, opt<std::vector<std::string>>(a, key).value_or(std::vector<std::string>{}));
      };
      c.generate.syntax_cmd = argv("syntax");
      c.generate.functional_cmd = argv("functional");
      c.generate.timing_cmd = argv("timing");
    }

    const Json& s = data.contains("simulate") ? data.at("simulate") : empty;
    check_keys(s, "simulate", {"calibration", "random_inputs", "seed", "fixed_latency_trials"});
    c.simulate.calibration = path_of(s, "calibration");
    c.simulate.random = opt<std::size_t>(s, "random_inputs").value_or(1000);
    c.simulate.seed = opt<std::uint64_t>(s, "seed").value_or(1);
    c.fixed_latency_trials = opt<std::size_t>(s, "fixed_latency_trials").value_or(0);

    const Json& r = data.contains("report") ? data.at("report") : empty;
    check_keys(r, "report", {"records", "format"});
    c.records = path_of(r, "records");
    c.report_format = opt<std::string>(r, "format").value_or("both");
    if (c.report_format != "both") parse_format(c.report_format);
  } catch (const Json::exception& e) {
    throw UsageError(file.string() + ": " + e.what());
  }
  return c;
}

class StageError : public Error {
 public:
  StageError(std::string stage, ErrorKind kind, const std::string& what, int code)
      : Error(kind, what), stage_(std::move(stage)), code_(code) {}
  const std::string& stage() const { return stage_; }
  int code() const { return code_; }

 private:
  std::string stage_;
  int code_;
};

template <typename F>
void stage(const std::string& name, F&& f) {
  try {
    f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e.kind(), e.what(), exit_code_for(e.kind()));
  } catch (const std::filesystem::filesystem_error& e) {
    throw StageError(name, ErrorKind::data, e.what(), kExitData);
  }
}

void put(const fs::path& file, const std::string& text) {
  fs::create_directories(file.parent_path());
  write_file_atomic(file, text);
}

std::vector<fs::path> tree_files(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), root));
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

int run_all(const RunAllOptions& options, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_run_config(options.config);
  } catch (const Error& e) {
    err << "run-all: config: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  const std::optional<fs::path> target = options.output ? options.output : cfg.output;
  if (!target) {
    err << "run-all: config: no output directory (set \"output\" or pass --output)\n";
    return kExitUsage;
  }
  if (!cfg.profile) {
    err << "run-all: config: \"profile\" is required\n";
    return kExitUsage;
  }
  const fs::path output = fs::absolute(*target).lexically_normal();
  fs::path staging = output;
  staging += ".staging";

  try {
    fs::remove_all(staging);
    fs::create_directories(staging);
    std::unique_ptr<llm::CompletionBackend> backend;
    std::vector<std::string> stages;

    stage("backend", [&] { backend = make_backend(cfg.backend); });

    stage("profile", [&] {
      const std::size_t top = cfg.partition.top_k.value_or(5);
      const auto ranking = load_ranking(*cfg.profile, top, cfg.build_flags);
      put(staging / "profile/ranking.txt", profile::render_ranking_text(ranking));
      put(staging / "profile/ranking.json",
          dump_interchange(make_envelope("ranking", profile::to_json(ranking))));
      if (cfg.inlined_profile) {
        ProfileOptions po;
        po.input = *cfg.profile;
        po.top = top;
        po.flags = cfg.build_flags;
        po.diff = cfg.inlined_profile;
        po.diff_flags = cfg.inlined_build_flags;
        const auto inlined = load_ranking(*cfg.inlined_profile, top, cfg.inlined_build_flags);
        const auto report = profile::diff_inline_views(inlined, ranking);
        put(staging / "profile/inline_exposure.txt", profile::render_exposure_text(report));
        po.format = perf::ReportFormat::machine;
        put(staging / "profile/inline_exposure.json", run_profile(po));
      }
      out << fmt::format("profile: {} ranked, {:.2f}% covered\n", ranking.entries.size(),
                         ranking.total_pct_covered());
      stages.push_back("profile");
    });

    partition::PartitionReport report;
    stage("partition", [&] {
      report = compute_partition(cfg.partition, backend.get());
      put(staging / "partition/report.txt", render_partition(report, perf::ReportFormat::text));
      put(staging / "partition/report.json", render_partition(report, perf::ReportFormat::machine));
      out << fmt::format("partition: {} profiler-guided, {} source-guided candidates\n",
                         report.profiler.size(), report.llm.size());
      stages.push_back("partition");
    });

    // Kernels to generate: the profiler-guided candidates, else the LLM ones.
    const auto& chosen = report.profiler.size() > 0 ? report.profiler : report.llm;
    std::vector<std::string> kernels, skipped;
    for (const auto& name : chosen.names()) {
      (kernel::parse_kernel_id(name) ? kernels : skipped).push_back(name);
    }

    stage("generate", [&] {
      if (kernels.empty()) throw DataError("no candidate names an accelerated kernel");
      if (!backend) throw UsageError("generation needs a backend");
      for (const auto& k : kernels) {
        GenerateOptions go = cfg.generate;
        go.kernel = k;
        go.output = staging / "generate" / k;
        const auto result = run_generate(go, *backend, err);
        if (!result.done) {
          throw StageError("generate", ErrorKind::verification, result.summary, kExitBudget);
        }
        out << "generate: " << k << ": Done after " << result.iterations << " iteration(s)\n";
      }
      stages.push_back("generate");
    });

    stage("simulate", [&] {
      std::string summary;
      bool passed = true;
      for (const auto& k : kernels) {
        for (const auto variant : {sim::Variant::deep_pipelined, sim::Variant::sequential}) {
          SimulateOptions so = cfg.simulate;
          so.kernel = k;
          so.variant = std::string(sim::to_string(variant));
          if (cfg.fixed_latency_trials > 0) so.fixed_latency_trials = cfg.fixed_latency_trials;
          const auto text = run_simulate(so);
          summary += text.text;
          so.format = perf::ReportFormat::machine;
          const auto machine = run_simulate(so);
          put(staging / "simulate" / fmt::format("{}_{}.json", k, so.variant), machine.text);
          passed = passed && text.passed;
        }
      }
      put(staging / "simulate/summary.txt", summary);
      out << summary;
      if (!passed) throw VerificationError("simulation disagrees with the oracle or the calibrated cycles");
      stages.push_back("simulate");
    });

    if (cfg.records) {
      stage("report", [&] {
        if (cfg.report_format != "machine") {
          put(staging / "report/report.txt", run_report(*cfg.records, perf::ReportFormat::text));
        }
        if (cfg.report_format != "text") {
          put(staging / "report/report.json", run_report(*cfg.records, perf::ReportFormat::machine));
        }
        out << "report: written\n";
        stages.push_back("report");
      });
    }

    stage("manifest", [&] {
      Json files = Json::array();
      for (const auto& rel : tree_files(staging)) {
        const std::string text = read_file(staging / rel);
        Json f;
        f["path"] = rel.generic_string();
        f["bytes"] = text.size();
        f["sha256"] = sha256_hex(text);
        files.push_back(f);
      }
      Json data;
      data["config_sha256"] = sha256_hex(read_file(options.config));
      data["stages"] = stages;
      data["kernels"] = kernels;
      data["not_generated"] = skipped;
      data["files"] = files;
      put(staging / "manifest.json", dump_interchange(make_envelope("run-manifest", data)));
      if (output.has_parent_path()) fs::create_directories(output.parent_path());
      replace_directory(staging, output);
    });
    out << "run-all: complete, output in " << output.string() << "\n";
    return kExitOk;
  } catch (const StageError& e) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    err << "run-all: stage " << e.stage() << ": " << e.what() << "\n";
    return e.code();
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
}

}  // namespace pqc::cli
