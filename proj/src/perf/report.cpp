#include "pqc/perf/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "pqc/common/error.hpp"
#include "pqc/common/fs.hpp"

namespace pqc::perf {

namespace {

constexpr const char* kHeader = "kernel,approach,baseline_ns,cp_ns,cycles,lut,ff,dsp,power_w";
constexpr const char* kColumns[] = {"kernel", "approach", "baseline_ns", "cp_ns", "cycles",
                                    "lut",    "ff",       "dsp",         "power_w"};
constexpr std::size_t kColumnCount = std::size(kColumns);

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                     : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view text, std::size_t line, const char* column) {
  text = trim(text);
  if (text.empty()) throw ParseError(line, fmt::format("column {}: missing value", column));
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ParseError(line, fmt::format("column {}: '{}' is not a number", column, text));
  }
  return v;
}

std::uint64_t parse_count(std::string_view text, std::size_t line, const char* column) {
  text = trim(text);
  if (text.empty()) throw ParseError(line, fmt::format("column {}: missing value", column));
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, fmt::format("column {}: '{}' is not a non-negative integer", column, text));
  }
  return v;
}

std::optional<double> delta_pct(double llm, double hls) {
  if (hls == 0) return std::nullopt;
  return (llm - hls) / hls * 100.0;
}

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(); }

std::string fmt_opt_pct(const std::optional<double>& v) {
  return v ? fmt::format("{:+.2f}%", *v) : std::string("n/a");
}

}  // namespace

std::string_view to_string(Approach a) { return a == Approach::LLM ? "LLM" : "HLS"; }

std::optional<Approach> parse_approach(std::string_view text) {
  if (text == "LLM") return Approach::LLM;
  if (text == "HLS") return Approach::HLS;
  return std::nullopt;
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "text") return ReportFormat::text;
  if (text == "machine" || text == "json") return ReportFormat::machine;
  return std::nullopt;
}

const BaselineRecord* RecordSet::baseline_for(std::string_view kernel) const {
  for (const auto& b : baselines) {
    if (b.kernel == kernel) return &b;
  }
  return nullptr;
}

void validate(const ImplRecord& r) {
  if (r.kernel.empty()) throw DataError("record with empty kernel name");
  if (!(r.cp_ns > 0)) throw DataError(r.kernel + ": cp_ns must be positive");
  if (r.cycles < 1) throw DataError(r.kernel + ": cycles must be at least 1");
  if (r.power_w < 0) throw DataError(r.kernel + ": power_w must not be negative");
}

double exec_time(double cp_ns, std::uint64_t cycles) {
  if (!(cp_ns > 0) || cycles == 0) throw DataError("execution time needs cp_ns > 0 and cycles >= 1");
  const auto cp_micro = static_cast<std::uint64_t>(std::llround(cp_ns * 1e6));
  const std::uint64_t centi = (cp_micro * cycles + 5000) / 10000;
  return static_cast<double>(centi) / 100.0;
}

double exec_time(const ImplRecord& r) { return exec_time(r.cp_ns, r.cycles); }

double speedup(const ImplRecord& r, const BaselineRecord& b) {
  if (r.kernel != b.kernel) {
    throw DataError("baseline for " + b.kernel + " does not match record for " + r.kernel);
  }
  if (!(b.time_ns > 0)) throw DataError(b.kernel + ": baseline time must be positive");
  return b.time_ns / exec_time(r);
}

RecordSet parse_records(std::string_view csv) {
  RecordSet set;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  std::map<std::pair<std::string, Approach>, std::size_t> seen;
  while (pos < csv.size()) {
    const auto nl = csv.find('\n', pos);
    std::string_view line = trim(csv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? csv.size() : nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kHeader) {
        throw ParseError(line_no, fmt::format("expected header '{}'", kHeader));
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() < kColumnCount) {
      throw ParseError(line_no, fmt::format("column {}: missing value", kColumns[fields.size()]));
    }
    if (fields.size() > kColumnCount) {
      throw ParseError(line_no, fmt::format("{} fields, expected {}", fields.size(), kColumnCount));
    }
    ImplRecord r;
    r.kernel = std::string(trim(fields[0]));
    if (r.kernel.empty()) throw ParseError(line_no, "column kernel: missing value");
    const auto approach = parse_approach(trim(fields[1]));
    if (!approach) {
      throw ParseError(line_no, fmt::format("column approach: unknown approach '{}' (LLM or HLS)",
                                            trim(fields[1])));
    }
    r.approach = *approach;
    const double baseline = parse_double(fields[2], line_no, "baseline_ns");
    r.cp_ns = parse_double(fields[3], line_no, "cp_ns");
    r.cycles = parse_count(fields[4], line_no, "cycles");
    r.lut = parse_count(fields[5], line_no, "lut");
    r.ff = parse_count(fields[6], line_no, "ff");
    r.dsp = parse_count(fields[7], line_no, "dsp");
    r.power_w = parse_double(fields[8], line_no, "power_w");
    if (!(baseline > 0)) throw ParseError(line_no, "column baseline_ns: must be positive");
    if (!(r.cp_ns > 0)) throw ParseError(line_no, "column cp_ns: must be positive");
    if (r.cycles < 1) throw ParseError(line_no, "column cycles: must be at least 1");
    if (r.power_w < 0) throw ParseError(line_no, "column power_w: must not be negative");

    if (!seen.emplace(std::pair{r.kernel, r.approach}, line_no).second) {
      throw ParseError(line_no, fmt::format("duplicate record for {} {}", r.kernel, to_string(r.approach)));
    }
    if (const auto* b = set.baseline_for(r.kernel)) {
      if (b->time_ns != baseline) {
        throw ParseError(line_no, fmt::format("column baseline_ns: {} disagrees with {} given earlier for {}",
                                              baseline, b->time_ns, r.kernel));
      }
    } else {
      set.baselines.push_back({r.kernel, baseline});
    }
    set.records.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError(std::max<std::size_t>(line_no, 1), "record file has no header row");
  return set;
}

RecordSet load_impl_records(const std::filesystem::path& file) { return parse_records(read_file(file)); }

std::string format_records(const RecordSet& set) {
  std::string out = std::string(kHeader) + "\n";
  for (const auto& r : set.records) {
    const auto* b = set.baseline_for(r.kernel);
    if (!b) throw DataError("no baseline for " + r.kernel);
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.kernel, to_string(r.approach), b->time_ns,
                       r.cp_ns, r.cycles, r.lut, r.ff, r.dsp, r.power_w);
  }
  return out;
}

std::vector<Citation> published_citations() {
  return {{"power_delta", "-6.99%",
           "LLM vs HLS power, one kernel excluded; aggregation method not stated"},
          {"lut_ff_delta", "+31.86%",
           "LLM vs HLS LUT and FF usage on average; aggregation method not stated"}};
}

Summary aggregate(const RecordSet& set) {
  Summary s;
  std::map<Approach, std::vector<double>> by_approach;
  for (const auto& r : set.records) {
    validate(r);
    const auto* b = set.baseline_for(r.kernel);
    if (!b) throw DataError("no baseline for " + r.kernel);
    RowResult row{r, b->time_ns, exec_time(r), speedup(r, *b)};
    by_approach[r.approach].push_back(row.speedup);
    s.rows.push_back(std::move(row));
  }
  for (const auto& [approach, speedups] : by_approach) {
    ApproachSummary a;
    a.approach = approach;
    a.kernels = speedups.size();
    double sum = 0, log_sum = 0;
    for (double v : speedups) {
      sum += v;
      log_sum += std::log(v);
    }
    a.mean_speedup = sum / static_cast<double>(speedups.size());
    a.geomean_speedup = std::exp(log_sum / static_cast<double>(speedups.size()));
    s.approaches.push_back(a);
  }

  std::size_t max_index = 0;
  double power_sum = 0, lut_ff_sum = 0;
  for (const auto& b : set.baselines) {
    const RowResult* llm = nullptr;
    const RowResult* hls = nullptr;
    for (const auto& row : s.rows) {
      if (row.record.kernel != b.kernel) continue;
      (row.record.approach == Approach::LLM ? llm : hls) = &row;
    }
    if (!llm || !hls) continue;
    KernelComparison k;
    k.kernel = b.kernel;
    k.llm_time_ns = llm->time_ns;
    k.hls_time_ns = hls->time_ns;
    k.cross_ratio = hls->time_ns / llm->time_ns;
    k.lut_delta_pct = delta_pct(static_cast<double>(llm->record.lut), static_cast<double>(hls->record.lut));
    k.ff_delta_pct = delta_pct(static_cast<double>(llm->record.ff), static_cast<double>(hls->record.ff));
    k.dsp_delta_pct = delta_pct(static_cast<double>(llm->record.dsp), static_cast<double>(hls->record.dsp));
    k.power_delta_pct = delta_pct(llm->record.power_w, hls->record.power_w);
    power_sum += k.power_delta_pct.value_or(0);
    lut_ff_sum += delta_pct(static_cast<double>(llm->record.lut + llm->record.ff),
                            static_cast<double>(hls->record.lut + hls->record.ff))
                      .value_or(0);
    if (!s.kernels.empty() && k.cross_ratio > s.kernels[max_index].cross_ratio) max_index = s.kernels.size();
    s.kernels.push_back(std::move(k));
  }
  if (!s.kernels.empty()) {
    s.kernels[max_index].max_ratio = true;
    s.mean_power_delta_pct = power_sum / static_cast<double>(s.kernels.size());
    s.mean_lut_ff_delta_pct = lut_ff_sum / static_cast<double>(s.kernels.size());
  }
  s.citations = published_citations();
  return s;
}

Json to_json(const Summary& s) {
  Json j;
  j["rows"] = Json::array();
  for (const auto& r : s.rows) {
    j["rows"].push_back({{"kernel", r.record.kernel},
                         {"approach", to_string(r.record.approach)},
                         {"time_ns", r.time_ns},
                         {"speedup", r.speedup}});
  }
  j["kernels"] = Json::array();
  for (const auto& k : s.kernels) {
    j["kernels"].push_back({{"kernel", k.kernel},
                            {"llm_time_ns", k.llm_time_ns},
                            {"hls_time_ns", k.hls_time_ns},
                            {"cross_ratio", k.cross_ratio},
                            {"lut_delta_pct", opt(k.lut_delta_pct)},
                            {"ff_delta_pct", opt(k.ff_delta_pct)},
                            {"dsp_delta_pct", opt(k.dsp_delta_pct)},
                            {"power_delta_pct", opt(k.power_delta_pct)},
                            {"max_ratio", k.max_ratio}});
  }
  j["approaches"] = Json::array();
  for (const auto& a : s.approaches) {
    j["approaches"].push_back({{"approach", to_string(a.approach)},
                               {"kernels", a.kernels},
                               {"mean_speedup", a.mean_speedup},
                               {"geomean_speedup", a.geomean_speedup}});
  }
  j["mean_power_delta_pct"] = s.mean_power_delta_pct;
  j["mean_lut_ff_delta_pct"] = s.mean_lut_ff_delta_pct;
  j["published"] = Json::array();
  for (const auto& c : s.citations) {
    j["published"].push_back({{"metric", c.metric}, {"stated", c.stated}, {"note", c.note}});
  }
  return j;
}

namespace {

Json records_to_json(const RecordSet& set) {
  Json j = Json::array();
  for (const auto& r : set.records) {
    j.push_back({{"kernel", r.kernel},
                 {"approach", to_string(r.approach)},
                 {"baseline_ns", set.baseline_for(r.kernel)->time_ns},
                 {"cp_ns", r.cp_ns},
                 {"cycles", r.cycles},
                 {"lut", r.lut},
                 {"ff", r.ff},
                 {"dsp", r.dsp},
                 {"power_w", r.power_w}});
  }
  return j;
}

std::string render_text(const Summary& s) {
  std::string out;
  out += fmt::format("{:<26} {:>12} {:<8} {:>8} {:>6} {:>10} {:>5} {:>5} {:>4} {:>9} {:>8}\n", "Kernel",
                     "Baseline(ns)", "Approach", "CP(ns)", "Cycles", "Time(ns)", "LUT", "FF", "DSP",
                     "Power(W)", "Speedup");
  for (const auto& row : s.rows) {
    const auto& r = row.record;
    out += fmt::format("{:<26} {:>12.2f} {:<8} {:>8} {:>6} {:>10.2f} {:>5} {:>5} {:>4} {:>9} {:>8.3f}\n",
                       r.kernel, row.baseline_ns, to_string(r.approach), r.cp_ns, r.cycles, row.time_ns,
                       r.lut, r.ff, r.dsp, r.power_w, row.speedup);
  }
  out += "\nMean speedup over software\n";
  for (const auto& a : s.approaches) {
    out += fmt::format("  {:<4} arithmetic {:.3f}x  geometric {:.3f}x  ({} kernels)\n", to_string(a.approach),
                       a.mean_speedup, a.geomean_speedup, a.kernels);
  }
  if (!s.kernels.empty()) {
    out += "\nLLM vs HLS per kernel\n";
    out += fmt::format("  {:<26} {:>11} {:>9} {:>9} {:>9} {:>9}\n", "kernel", "HLS/LLM", "LUT", "FF", "DSP",
                       "Power");
    for (const auto& k : s.kernels) {
      out += fmt::format("  {:<26} {:>10.2f}x {:>9} {:>9} {:>9} {:>9}{}\n", k.kernel, k.cross_ratio,
                         fmt_opt_pct(k.lut_delta_pct), fmt_opt_pct(k.ff_delta_pct),
                         fmt_opt_pct(k.dsp_delta_pct), fmt_opt_pct(k.power_delta_pct),
                         k.max_ratio ? "  <- max" : "");
    }
    out += fmt::format("  mean power delta {:+.2f}%, mean LUT+FF delta {:+.2f}% (computed)\n",
                       s.mean_power_delta_pct, s.mean_lut_ff_delta_pct);
  }
  out += "\nPublished figures (not recomputed)\n";
  for (const auto& c : s.citations) {
    out += fmt::format("  {:<13} {:>8}  {}\n", c.metric, c.stated, c.note);
  }
  return out;
}

}  // namespace

std::string render_report(const RecordSet& set, ReportFormat format) {
  const Summary s = aggregate(set);
  if (format == ReportFormat::text) return render_text(s);
  Json data;
  data["records"] = records_to_json(set);
  data["summary"] = to_json(s);
  return dump_interchange(make_envelope("perf-report", data));
}

RecordSet parse_machine_report(std::string_view text) {
  const Json data = open_envelope(parse_interchange(text), "perf-report");
  RecordSet set;
  try {
    std::size_t index = 0;
    for (const auto& j : data.at("records")) {
      ++index;
      ImplRecord r;
      r.kernel = j.at("kernel").get<std::string>();
      const auto approach = parse_approach(j.at("approach").get<std::string>());
      if (!approach) throw DataError(fmt::format("record {}: unknown approach", index));
      r.approach = *approach;
      r.cp_ns = j.at("cp_ns").get<double>();
      r.cycles = j.at("cycles").get<std::uint64_t>();
      r.lut = j.at("lut").get<std::uint64_t>();
      r.ff = j.at("ff").get<std::uint64_t>();
      r.dsp = j.at("dsp").get<std::uint64_t>();
      r.power_w = j.at("power_w").get<double>();
      const double baseline = j.at("baseline_ns").get<double>();
      if (const auto* b = set.baseline_for(r.kernel)) {
        if (b->time_ns != baseline) throw DataError(fmt::format("record {}: inconsistent baseline", index));
      } else {
        set.baselines.push_back({r.kernel, baseline});
      }
      set.records.push_back(std::move(r));
    }
    if (to_json(aggregate(set)) != data.at("summary")) {
      throw DataError("report summary does not match its records");
    }
  } catch (const Json::exception& ex) {
    throw DataError(std::string("malformed perf report: ") + ex.what());
  }
  return set;
}

}  // namespace pqc::perf
