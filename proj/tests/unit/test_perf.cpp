#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pqc/common/error.hpp"
#include "pqc/perf/report.hpp"

using namespace pqc;
using namespace pqc::perf;
using pqc::testing::read_fixture;

namespace {

RecordSet impl_records() { return parse_records(read_fixture("impl_records.csv")); }

// Published "Time (ns)" column, row order of the fixture.
constexpr double kPublishedTimes[] = {28.83, 28.94, 691.65, 1782.05, 11.15, 21.44, 301.70, 380.43};

const ApproachSummary& approach(const Summary& s, Approach a) {
  for (const auto& x : s.approaches) {
    if (x.approach == a) return x;
  }
  throw std::runtime_error("approach missing");
}

}  // namespace

TEST(ExecTime, Examples) {
  EXPECT_DOUBLE_EQ(exec_time(4.805, 6), 28.83);
  EXPECT_DOUBLE_EQ(exec_time(8.955, 199), 1782.05);
  EXPECT_DOUBLE_EQ(exec_time(1.0, 1), 1.00);
  EXPECT_DOUBLE_EQ(exec_time(3.715, 3), 11.15);
}

TEST(ExecTime, MatchesEveryPublishedRow) {
  const auto set = impl_records();
  ASSERT_EQ(set.records.size(), 8u);
  for (std::size_t i = 0; i < set.records.size(); ++i) {
    EXPECT_NEAR(exec_time(set.records[i]), kPublishedTimes[i], 0.01 + 1e-9) << set.records[i].kernel;
    EXPECT_DOUBLE_EQ(exec_time(set.records[i]), kPublishedTimes[i]) << set.records[i].kernel;
  }
}

TEST(Speedup, Examples) {
  const auto set = impl_records();
  const auto& r = set.records;
  EXPECT_NEAR(speedup(r[3], *set.baseline_for(r[3].kernel)), 0.723, 0.0005);
  EXPECT_NEAR(speedup(r[0], *set.baseline_for(r[0].kernel)), 45.73 / 28.83, 1e-12);
  EXPECT_NEAR(speedup(r[0], *set.baseline_for(r[0].kernel)), 1.586, 0.0005);
  EXPECT_DOUBLE_EQ(speedup(ImplRecord{"k", Approach::LLM, 2.5, 4}, BaselineRecord{"k", 10.0}), 1.0);
  EXPECT_THROW(speedup(r[0], BaselineRecord{"modp_add", 1.0}), DataError);
}

TEST(Speedup, ScaleConsistentAndMonotone) {
  const auto set = impl_records();
  for (const auto& r : set.records) {
    const auto& b = *set.baseline_for(r.kernel);
    for (std::uint64_t c : {1u, 2u, 3u, 5u}) {
      if (r.cycles % c != 0) continue;
      ImplRecord scaled = r;
      scaled.cp_ns = r.cp_ns * static_cast<double>(c);
      scaled.cycles = r.cycles / c;
      EXPECT_DOUBLE_EQ(exec_time(scaled), exec_time(r)) << r.kernel << " c=" << c;
      EXPECT_DOUBLE_EQ(speedup(scaled, b), speedup(r, b));
    }
    ImplRecord faster = r;
    faster.cp_ns = r.cp_ns * 0.9;
    EXPECT_GT(speedup(faster, b), speedup(r, b));
  }
}

TEST(Aggregate, PublishedMeans) {
  const auto s = aggregate(impl_records());
  // Oracle: arithmetic means of baseline / published time.
  const double baselines[] = {45.73, 1288.43, 25.26, 426.31};
  double llm = 0, hls = 0;
  for (int k = 0; k < 4; ++k) {
    llm += baselines[k] / kPublishedTimes[2 * k];
    hls += baselines[k] / kPublishedTimes[2 * k + 1];
  }
  EXPECT_NEAR(approach(s, Approach::LLM).mean_speedup, llm / 4, 1e-12);
  EXPECT_NEAR(approach(s, Approach::HLS).mean_speedup, hls / 4, 1e-12);
  EXPECT_NEAR(approach(s, Approach::LLM).mean_speedup, 1.782, 0.005);
  EXPECT_NEAR(approach(s, Approach::HLS).mean_speedup, 1.150, 0.005);
  EXPECT_LT(approach(s, Approach::LLM).geomean_speedup, approach(s, Approach::LLM).mean_speedup);
}

TEST(Aggregate, CrossRatioMaximumIsFlagged) {
  const auto s = aggregate(impl_records());
  ASSERT_EQ(s.kernels.size(), 4u);
  std::size_t flagged = 0;
  for (const auto& k : s.kernels) {
    EXPECT_NEAR(k.cross_ratio, k.hls_time_ns / k.llm_time_ns, 1e-12);
    if (k.max_ratio) {
      ++flagged;
      EXPECT_EQ(k.kernel, "zint_add_scaled_mul_small");
      EXPECT_NEAR(k.cross_ratio, 1782.05 / 691.65, 1e-12);
      EXPECT_NEAR(k.cross_ratio, 2.58, 0.005);
    }
  }
  EXPECT_EQ(flagged, 1u);
}

TEST(Aggregate, ResourceAndPowerDeltas) {
  const auto s = aggregate(impl_records());
  const auto& mm = s.kernels[0];
  EXPECT_EQ(mm.kernel, "modp_montymul");
  EXPECT_NEAR(*mm.ff_delta_pct, (443.0 - 246.0) / 246.0 * 100, 1e-9);
  EXPECT_NEAR(*mm.power_delta_pct, (0.725 - 0.775) / 0.775 * 100, 1e-9);
  EXPECT_FALSE(s.kernels[2].dsp_delta_pct.has_value());  // modp_add uses no DSPs
  ASSERT_EQ(s.citations.size(), 2u);
  EXPECT_EQ(s.citations[0].stated, "-6.99%");
  EXPECT_EQ(s.citations[1].stated, "+31.86%");
}

TEST(Aggregate, SingleRecordMeanIsItsSpeedup) {
  RecordSet set;
  set.records.push_back({"modp_add", Approach::HLS, 5.36, 4, 94, 102, 0, 0.759});
  set.baselines.push_back({"modp_add", 25.26});
  const auto s = aggregate(set);
  ASSERT_EQ(s.approaches.size(), 1u);
  EXPECT_DOUBLE_EQ(s.approaches[0].mean_speedup, speedup(set.records[0], set.baselines[0]));
  EXPECT_TRUE(s.kernels.empty());
}

TEST(Aggregate, MissingBaseline) {
  RecordSet set;
  set.records.push_back({"modp_add", Approach::HLS, 5.36, 4, 94, 102, 0, 0.759});
  EXPECT_THROW(aggregate(set), DataError);
}

TEST(Records, StrictLoading) {
  const std::string header = "kernel,approach,baseline_ns,cp_ns,cycles,lut,ff,dsp,power_w\n";
  try {
    parse_records(header + "modp_add,LLM,25.26,3.715,3,80,228,0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("power_w"), std::string::npos);
  }
  try {
    parse_records(header + "\nmodp_add,FPGA,25.26,3.715,3,80,228,0,0.7\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("approach"), std::string::npos);
  }
  try {
    parse_records(header + "modp_add,LLM,25.26,3.715,three,80,228,0,0.7\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("cycles"), std::string::npos);
  }
  EXPECT_THROW(parse_records(header + "modp_add,LLM,25.26,0,3,80,228,0,0.7\n"), ParseError);
  EXPECT_THROW(parse_records(header + "modp_add,LLM,25.26,1,3,80,228,0,0.7\nmodp_add,LLM,25.26,1,3,80,228,0,0.7\n"),
               ParseError);
  EXPECT_THROW(parse_records(header + "modp_add,LLM,25.26,1,3,80,228,0,0.7\nmodp_add,HLS,25.3,1,3,80,228,0,0.7\n"),
               ParseError);
  EXPECT_THROW(parse_records("kernel,approach\n"), ParseError);
  EXPECT_THROW(parse_records(""), ParseError);
}

TEST(Records, CsvRoundTrip) {
  const auto set = impl_records();
  EXPECT_EQ(format_records(set), read_fixture("impl_records.csv"));
  EXPECT_EQ(parse_records(format_records(set)), set);
}

TEST(Report, MachineRoundTripIsByteStable) {
  const auto set = impl_records();
  const auto first = render_report(set, ReportFormat::machine);
  const auto back = parse_machine_report(first);
  EXPECT_EQ(back, set);
  EXPECT_EQ(render_report(back, ReportFormat::machine), first);
}

TEST(Report, TamperedSummaryIsRejected) {
  auto doc = parse_interchange(render_report(impl_records(), ReportFormat::machine));
  doc["data"]["summary"]["approaches"][0]["mean_speedup"] = 2.0;
  EXPECT_THROW(parse_machine_report(dump_interchange(doc)), DataError);
}

TEST(Report, TextTableFollowsColumnOrder) {
  const auto text = render_report(impl_records(), ReportFormat::text);
  const auto header = text.substr(0, text.find('\n'));
  std::size_t last = 0;
  for (const char* col : {"Kernel", "Baseline(ns)", "Approach", "CP(ns)", "Cycles", "Time(ns)", "LUT", "FF",
                          "DSP", "Power(W)", "Speedup"}) {
    const auto at = header.find(col, last);
    ASSERT_NE(at, std::string::npos) << col;
    last = at;
  }
  EXPECT_NE(text.find("1782.05"), std::string::npos);
  EXPECT_NE(text.find("arithmetic 1.782x"), std::string::npos);
  EXPECT_NE(text.find("arithmetic 1.150x"), std::string::npos);
  EXPECT_NE(text.find("2.58x"), std::string::npos);
  EXPECT_NE(text.find("Published figures"), std::string::npos);
}
