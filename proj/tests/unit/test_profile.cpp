#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "pqc/common/error.hpp"
#include "pqc/profile/flat_profile.hpp"
#include "pqc/profile/ranking.hpp"

namespace pqc::profile {
namespace {

using pqc::testing::read_fixture;

constexpr const char* kHeader =
    "  %   cumulative   self              self     total\n"
    " time   seconds   seconds    calls  ms/call  ms/call  name\n";

TEST(ParseFlatProfile, SingleConstructedRow) {
  const auto entries = parse_flat_profile(
      std::string(kHeader) + "18.52  0.15  0.15  100  0.00  0.00  modp_montymul\n");
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].function_name, "modp_montymul");
  EXPECT_DOUBLE_EQ(entries[0].self_pct, 18.52);
  EXPECT_DOUBLE_EQ(entries[0].cumulative_seconds, 0.15);
  EXPECT_DOUBLE_EQ(entries[0].self_seconds, 0.15);
  EXPECT_EQ(entries[0].calls, 100u);
  EXPECT_EQ(entries[0].self_ms_per_call, 0.0);
}

TEST(ParseFlatProfile, EmptyBody) {
  EXPECT_TRUE(parse_flat_profile(std::string(kHeader) + "\n").empty());
  EXPECT_TRUE(parse_flat_profile(kHeader).empty());
}

TEST(ParseFlatProfile, MissingHeader) {
  EXPECT_THROW(parse_flat_profile("18.52 0.15 0.15 100 0.00 0.00 f\n"), DataError);
  EXPECT_THROW(parse_flat_profile(""), DataError);
}

TEST(ParseFlatProfile, MalformedNumberReportsLine) {
  try {
    parse_flat_profile(std::string(kHeader) + " 1.00 1.00 1.00 f\n 1,5 2.00 1.00 g\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find("% time"), std::string::npos);
  }
  EXPECT_THROW(parse_flat_profile(std::string(kHeader) + "101.0 1 1 f\n"), ParseError);
  EXPECT_THROW(parse_flat_profile(std::string(kHeader) + "1.0 1 1\n"), ParseError);
}

TEST(ParseFlatProfile, UninstrumentedRowHasNoCalls) {
  const auto entries = parse_flat_profile(std::string(kHeader) + "  6.17  58.01  6.17   _init\n");
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].function_name, "_init");
  EXPECT_FALSE(entries[0].calls.has_value());
  EXPECT_FALSE(entries[0].total_ms_per_call.has_value());
}

TEST(ParseFlatProfile, NoInlineFixtureInFileOrder) {
  const auto entries = parse_flat_profile(read_fixture("profiles/falcon_keygen_O3_noinline.gprof"));
  ASSERT_EQ(entries.size(), 5u);
  const std::vector<double> pct{18.52, 18.51, 14.81, 6.17, 4.95};
  for (std::size_t i = 0; i < pct.size(); ++i) EXPECT_DOUBLE_EQ(entries[i].self_pct, pct[i]);
  EXPECT_EQ(entries[3].function_name, "_init");
}

TEST(ParseFlatProfile, ReserializeRoundTrip) {
  for (const char* f : {"profiles/falcon_keygen_O3.gprof", "profiles/falcon_keygen_O3_noinline.gprof"}) {
    const auto first = parse_flat_profile(read_fixture(f));
    const auto again = parse_flat_profile(format_flat_profile(first));
    EXPECT_EQ(first, again) << f;
  }
  // Values that do not fit two decimals still round-trip.
  const std::vector<ProfileEntry> odd{{"f", 1.125, 0.5, 0.001, 3, 0.0001, 2.5}};
  EXPECT_EQ(parse_flat_profile(format_flat_profile(odd)), odd);
}

TEST(RankHotspots, InlinedBuildOrder) {
  const auto r = rank_hotspots(parse_flat_profile(read_fixture("profiles/falcon_keygen_O3.gprof")),
                               5, "-O3");
  EXPECT_EQ(r.names(), (std::vector<std::string>{"solve_NTRU_intermediate", "zint_rebuild_CRT",
                                                 "falcon_inner_keygen", "poly_small_mkgauss",
                                                 "process_block"}));
  EXPECT_EQ(r.build_flags, "-O3");
}

TEST(RankHotspots, NoInlineBuildOrder) {
  const auto r = rank_hotspots(
      parse_flat_profile(read_fixture("profiles/falcon_keygen_O3_noinline.gprof")), 5);
  EXPECT_EQ(r.names(), (std::vector<std::string>{"modp_montymul", "modp_add",
                                                 "zint_add_scaled_mul_small", "_init",
                                                 "zint_mod_small_unsigned"}));
  EXPECT_NEAR(r.total_pct_covered(), 62.96, 1e-9);
  EXPECT_LE(r.total_pct_covered(), 100.5);
}

TEST(RankHotspots, TiesBreakAlphabetically) {
  std::vector<ProfileEntry> e{{"zeta", 5.0, 5, 5, {}, {}, {}}, {"alpha", 5.0, 10, 5, {}, {}, {}},
                              {"mid", 7.0, 17, 7, {}, {}, {}}};
  EXPECT_EQ(rank_hotspots(e, 3).names(), (std::vector<std::string>{"mid", "alpha", "zeta"}));
  EXPECT_THROW(rank_hotspots(e, 0), UsageError);
}

TEST(RankHotspots, PermutationPrefixAndDeterminism) {
  const auto entries = parse_flat_profile(read_fixture("profiles/falcon_keygen_O3.gprof"));
  std::set<std::string> input_names;
  for (const auto& e : entries) input_names.insert(e.function_name);
  for (std::size_t k = 1; k <= 7; ++k) {
    const auto r = rank_hotspots(entries, k);
    EXPECT_EQ(r.entries.size(), std::min(k, entries.size()));
    for (const auto& n : r.names()) EXPECT_TRUE(input_names.count(n));
    for (std::size_t i = 1; i < r.entries.size(); ++i) {
      EXPECT_GE(r.entries[i - 1].self_pct, r.entries[i].self_pct);
    }
    auto reversed = entries;
    std::reverse(reversed.begin(), reversed.end());
    EXPECT_EQ(rank_hotspots(reversed, k), r);
  }
}

TEST(DiffInlineViews, InlinedVersusNoInline) {
  const auto top = rank_hotspots(parse_flat_profile(read_fixture("profiles/falcon_keygen_O3.gprof")), 5);
  const auto low = rank_hotspots(
      parse_flat_profile(read_fixture("profiles/falcon_keygen_O3_noinline.gprof")), 5);
  const auto r = diff_inline_views(top, low);
  for (const char* name : {"modp_montymul", "modp_add", "zint_add_scaled_mul_small",
                           "zint_mod_small_unsigned"}) {
    EXPECT_NE(std::find(r.hidden_by_inlining.begin(), r.hidden_by_inlining.end(), name),
              r.hidden_by_inlining.end());
  }
  EXPECT_TRUE(r.in_both.empty());
  EXPECT_EQ(r.hidden_by_inlining.size(), 5u);
  EXPECT_NEAR(r.inlined_coverage_pct, 82.93, 1e-9);
}

TEST(DiffInlineViews, IdenticalAndDisjoint) {
  const HotspotRanking a{{{"f", 10, 10, 10, {}, {}, {}}, {"g", 5, 15, 5, {}, {}, {}}}, ""};
  const HotspotRanking b{{{"h", 9, 9, 9, {}, {}, {}}}, ""};
  EXPECT_TRUE(diff_inline_views(a, a).hidden_by_inlining.empty());
  EXPECT_EQ(diff_inline_views(a, b).hidden_by_inlining, std::vector<std::string>{"h"});
  EXPECT_THROW(diff_inline_views(a, HotspotRanking{}), DataError);
}

TEST(RankingJson, RoundTrip) {
  const auto r = rank_hotspots(
      parse_flat_profile(read_fixture("profiles/falcon_keygen_O3_noinline.gprof")), 5, "-O3 -fno-inline");
  const auto doc = make_envelope("ranking", to_json(r));
  const auto back = ranking_from_json(open_envelope(parse_interchange(dump_interchange(doc)), "ranking"));
  EXPECT_EQ(back, r);
  EXPECT_THROW(open_envelope(doc, "summary"), DataError);
}

}  // namespace
}  // namespace pqc::profile
