#include "app.hpp"

#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "pqc/common/error.hpp"
#include "pqc/kernel/kernel_io.hpp"
#include "pqc/llm/prompt.hpp"
#include "pqc/llm/vectors.hpp"

namespace fs = std::filesystem;

namespace pqc::cli {

namespace {

void add_backend_options(CLI::App& cmd, BackendOptions& b) {
  cmd.add_option("--replay", b.replay_dir, "Replay store directory (no network)");
  cmd.add_option("--endpoint", b.endpoint, "Chat-completion endpoint URL");
  cmd.add_option("--model", b.model, "Model name for the remote backend");
  cmd.add_option("--credential-env", b.credential_env,
                 "Environment variable holding the API credential")
      ->capture_default_str();
  cmd.add_option("--backend-timeout", b.timeout_s, "Remote request timeout in seconds")
      ->capture_default_str();
  cmd.add_option("--script", b.script, "Answer from these response files in order (fixture authoring)");
  cmd.add_option("--record-to", b.record_to, "Replay store that scripted exchanges are recorded into");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hardware/software co-design flow for post-quantum kernels", "pqc-codesign"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pqc-codesign 1.0.0");

  std::string format = "text";
  std::optional<fs::path> output;
  std::function<int()> action;

  // profile
  ProfileOptions po;
  auto* profile = app.add_subcommand("profile", "Rank hotspots of a gprof flat profile");
  profile->add_option("input", po.input, "gprof report or ranking document")->required();
  profile->add_option("--top", po.top, "Number of functions to keep")->capture_default_str();
  profile->add_option("--flags", po.flags, "Build flags the profile was taken with");
  profile->add_option("--diff", po.diff, "Inlined-build profile to compare against (this input is the no-inline view)");
  profile->add_option("--diff-flags", po.diff_flags, "Build flags of the --diff profile");
  profile->add_option("--format", format, "text or machine")->capture_default_str();
  profile->add_option("-o,--output", output, "Write here instead of standard output");
  profile->callback([&] {
    action = [&] {
      po.format = parse_format(format);
      Sink{out, output}.write(run_profile(po));
      return int(kExitOk);
    };
  });

  // partition
  PartitionOptions pa;
  std::string profile_path;
  auto* part = app.add_subcommand("partition", "Select candidate functions for acceleration");
  part->add_option("--profile,--ranking", pa.profile, "gprof report or ranking document");
  part->add_option("--flags", pa.flags, "Build flags the profile was taken with");
  part->add_option("--top", pa.top_k, "Keep the top k ranked functions (default 5)");
  part->add_option("--threshold", pa.threshold_pct, "Keep functions until this cumulative share (%)");
  part->add_option("--exclude", pa.exclusions, "Extra names never offered for acceleration");
  part->add_flag("!--no-default-exclusions", pa.default_exclusions, "Do not exclude _init");
  part->add_option("--mode", pa.mode, "abstract or full-code prompt")->capture_default_str();
  part->add_option("--algorithm", pa.algorithm, "Algorithm named in the ranking prompt");
  part->add_option("--sources", pa.sources, "Source bundle directory for full-code prompts");
  part->add_option("--function", pa.function_ids, "Function identifiers for abstract prompts");
  part->add_option("--templates", pa.templates, "Directory overriding the prompt templates");
  part->add_option("--agreement-k", pa.agreement_k, "k for the agreement metric (default: smaller set)");
  part->add_option("--normalization", pa.normalization, "exact or prefix")->capture_default_str();
  part->add_option("--format", format, "text or machine")->capture_default_str();
  part->add_option("-o,--output", output, "Write here instead of standard output");
  add_backend_options(*part, pa.backend);
  part->callback([&] {
    action = [&] {
      pa.format = parse_format(format);
      Sink{out, output}.write(run_partition(pa));
      return int(kExitOk);
    };
  });

  // generate
  GenerateOptions ge;
  std::string syntax_cmd, functional_cmd, timing_cmd;
  auto* gen = app.add_subcommand("generate", "Generate and refine an accelerator for one kernel");
  gen->add_option("--kernel", ge.kernel, "Kernel id")->required();
  gen->add_option("--budget", ge.budget, "Iteration budget")->capture_default_str();
  gen->add_option("--syntax-cmd", syntax_cmd, "Syntax checker command line")->required();
  gen->add_option("--functional-cmd", functional_cmd, "Functional checker command line")->required();
  gen->add_option("--timing-cmd", timing_cmd, "Timing checker command line")->required();
  gen->add_option("--adapter-timeout", ge.adapter_timeout_s, "Checker timeout in seconds")
      ->capture_default_str();
  gen->add_option("--target-cp", ge.target_cp_ns, "Critical-path target in ns");
  gen->add_option("--vectors", ge.vector_count, "Random test vectors to emit")->capture_default_str();
  gen->add_option("--seed", ge.seed, "Test-vector seed")->capture_default_str();
  gen->add_option("--device", ge.device, "Target device named in the prompt");
  gen->add_option("--templates", ge.templates, "Directory overriding the prompt templates");
  gen->add_option("-o,--output", ge.output, "Bundle output directory")->required();
  add_backend_options(*gen, ge.backend);
  gen->callback([&] {
    action = [&] {
      ge.syntax_cmd = split_command(syntax_cmd);
      ge.functional_cmd = split_command(functional_cmd);
      ge.timing_cmd = split_command(timing_cmd);
      auto backend = make_backend(ge.backend);
      if (!backend) throw UsageError("generate needs a backend (--replay or --endpoint)");
      const auto result = run_generate(ge, *backend, err);
      out << result.summary << "\n";
      return int(result.done ? kExitOk : kExitBudget);
    };
  });

  // simulate
  SimulateOptions si;
  auto* sim = app.add_subcommand("simulate", "Run a kernel through a cycle-level pipeline model");
  sim->add_option("--kernel", si.kernel, "Kernel id")->required();
  sim->add_option("--variant", si.variant, "deep (LLM style) or sequential (HLS style)")
      ->capture_default_str();
  sim->add_option("--vectors", si.vectors, "Vector file");
  sim->add_option("--random", si.random, "Number of seeded random inputs");
  sim->add_option("--seed", si.seed, "Seed for random inputs and the fixed-latency check")
      ->capture_default_str();
  sim->add_option("--limbs", si.limbs, "Limb count for random limb-kernel inputs");
  sim->add_option("--calibration", si.calibration, "Calibration file overriding the shipped models");
  sim->add_option("--check-fixed-latency", si.fixed_latency_trials,
                  "Check that this many random inputs all take the same cycles");
  sim->add_flag("--mutant", si.mutant, "Use the data-dependent negative-control model");
  sim->add_option("--trace", si.trace, "Write the cycle trace here");
  sim->add_option("--format", format, "text or machine")->capture_default_str();
  sim->callback([&] {
    action = [&] {
      si.format = parse_format(format);
      const auto result = run_simulate(si);
      out << result.text;
      return int(result.passed ? kExitOk : kExitVerification);
    };
  });

  // report
  fs::path records;
  auto* rep = app.add_subcommand("report", "Compute execution times, speedups and comparisons");
  rep->add_option("records", records, "Record file (CSV) or machine report")->required();
  rep->add_option("--format", format, "text or machine")->capture_default_str();
  rep->add_option("-o,--output", output, "Write here instead of standard output");
  rep->callback([&] {
    action = [&] {
      Sink{out, output}.write(run_report(records, parse_format(format)));
      return int(kExitOk);
    };
  });

  // run-all
  RunAllOptions ra;
  auto* all = app.add_subcommand("run-all", "Run every stage from a run configuration");
  all->add_option("--config", ra.config, "Run configuration")->required();
  all->add_option("--output", ra.output, "Output directory (overrides the config)");
  all->callback([&] {
    action = [&] { return run_all(ra, out, err); };
  });

  // prompt
  std::string prompt_kind;
  std::optional<std::string> prompt_kernel;
  std::string prompt_device{llm::kDefaultDevice};
  bool digest_only = false;
  auto* pr = app.add_subcommand("prompt", "Print the prompt the flow would send");
  pr->add_option("kind", prompt_kind, "ranking or generation")->required();
  pr->add_option("--algorithm", pa.algorithm, "Algorithm named in a ranking prompt");
  pr->add_option("--mode", pa.mode, "abstract or full-code")->capture_default_str();
  pr->add_option("--sources", pa.sources, "Source bundle directory");
  pr->add_option("--function", pa.function_ids, "Function identifiers");
  pr->add_option("--kernel", prompt_kernel, "Kernel of a generation prompt");
  pr->add_option("--device", prompt_device, "Target device")->capture_default_str();
  pr->add_option("--templates", pa.templates, "Directory overriding the prompt templates");
  pr->add_flag("--digest", digest_only, "Print only the replay key");
  pr->callback([&] {
    action = [&] {
      const auto templates = pa.templates ? llm::PromptTemplates::with_overrides(*pa.templates)
                                          : llm::PromptTemplates::builtin();
      llm::PromptSpec spec;
      if (prompt_kind == "ranking") {
        if (!pa.algorithm) throw UsageError("a ranking prompt needs --algorithm");
        const auto mode = llm::parse_prompt_mode(pa.mode);
        if (!mode) throw UsageError("unknown prompt mode '" + pa.mode + "'");
        std::vector<llm::SourceFile> sources;
        if (pa.sources) sources = llm::load_source_bundle(*pa.sources);
        spec = llm::build_ranking_prompt(*pa.algorithm, *mode, sources, pa.function_ids, templates);
      } else if (prompt_kind == "generation") {
        const auto id = prompt_kernel ? kernel::parse_kernel_id(*prompt_kernel) : std::nullopt;
        if (!id) throw UsageError("a generation prompt needs a valid --kernel");
        spec = llm::build_generation_prompt(*prompt_kernel, llm::kernel_reference_source(*id),
                                            prompt_device, llm::default_objectives(),
                                            llm::vector_file_name(*id), templates);
      } else {
        throw UsageError("prompt kind must be ranking or generation");
      }
      out << (digest_only ? llm::prompt_digest(spec.body) + "\n" : spec.body);
      return int(kExitOk);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? int(kExitOk) : int(kExitUsage);
  }

  try {
    return action();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace pqc::cli
