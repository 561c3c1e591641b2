#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pqc/common/interchange.hpp"

namespace pqc::perf {

enum class Approach { LLM, HLS };
std::string_view to_string(Approach a);
std::optional<Approach> parse_approach(std::string_view text);

/// One implemented accelerator.
struct ImplRecord {
  std::string kernel;
  Approach approach = Approach::LLM;
  double cp_ns = 0;
  std::uint64_t cycles = 0;
  std::uint64_t lut = 0;
  std::uint64_t ff = 0;
  std::uint64_t dsp = 0;
  double power_w = 0;

  friend bool operator==(const ImplRecord&, const ImplRecord&) = default;
};

/// Software execution time of a kernel on the host processor.
struct BaselineRecord {
  std::string kernel;
  double time_ns = 0;

  friend bool operator==(const BaselineRecord&, const BaselineRecord&) = default;
};

struct RecordSet {
  std::vector<ImplRecord> records;
  std::vector<BaselineRecord> baselines;  // one per kernel, first-seen order

  const BaselineRecord* baseline_for(std::string_view kernel) const;
  friend bool operator==(const RecordSet&, const RecordSet&) = default;
};

void validate(const ImplRecord& record);

/// cp_ns * cycles rounded half-up to 0.01 ns. The product is formed in
/// integer micro-nanoseconds so decimal inputs round as written.
double exec_time(double cp_ns, std::uint64_t cycles);
double exec_time(const ImplRecord& record);

/// baseline / exec_time. Kernel names must match (DataError otherwise).
double speedup(const ImplRecord& record, const BaselineRecord& baseline);

/// Record file: header "kernel,approach,baseline_ns,cp_ns,cycles,lut,ff,dsp,power_w"
/// then one row per record. Rows of one kernel must agree on baseline_ns;
/// a (kernel, approach) pair appears once. Errors are ParseError with the line.
RecordSet parse_records(std::string_view csv);
RecordSet load_impl_records(const std::filesystem::path& file);
std::string format_records(const RecordSet& set);

struct RowResult {
  ImplRecord record;
  double baseline_ns = 0;
  double time_ns = 0;
  double speedup = 0;
};

struct KernelComparison {
  std::string kernel;
  double llm_time_ns = 0;
  double hls_time_ns = 0;
  double cross_ratio = 0;  // HLS time / LLM time
  // LLM relative to HLS, in percent; empty when the HLS value is zero.
  std::optional<double> lut_delta_pct;
  std::optional<double> ff_delta_pct;
  std::optional<double> dsp_delta_pct;
  std::optional<double> power_delta_pct;
  bool max_ratio = false;
};

struct ApproachSummary {
  Approach approach = Approach::LLM;
  std::size_t kernels = 0;
  double mean_speedup = 0;  // arithmetic mean over kernels
  double geomean_speedup = 0;
};

/// Published aggregate that cannot be recomputed from the records.
struct Citation {
  std::string metric;
  std::string stated;
  std::string note;
};

struct Summary {
  std::vector<RowResult> rows;
  std::vector<KernelComparison> kernels;  // kernels with both approaches
  std::vector<ApproachSummary> approaches;
  double mean_power_delta_pct = 0;     // over kernels with both approaches
  double mean_lut_ff_delta_pct = 0;    // combined LUT+FF, same kernels
  std::vector<Citation> citations;
};

/// Every record needs a baseline (DataError otherwise).
Summary aggregate(const RecordSet& set);

/// Aggregate figures published alongside the records that cannot be recomputed from them.
std::vector<Citation> published_citations();

enum class ReportFormat { text, machine };
std::optional<ReportFormat> parse_report_format(std::string_view text);

std::string render_report(const RecordSet& set, ReportFormat format);

/// Reads a machine-readable report back. The embedded summary must equal the
/// one recomputed from the records (DataError otherwise).
RecordSet parse_machine_report(std::string_view text);

Json to_json(const Summary& summary);

}  // namespace pqc::perf
